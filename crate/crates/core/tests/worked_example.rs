mod common;

use gen_core::acquisition::{acquire_patterns, extract_predicate_arguments};
use gen_core::alignment::{best_alignment, build_score_matrix};
use gen_core::annotation::default_wh_words;
use gen_core::generation::{generate, MatchStrategy};
use gen_core::similarity::{EquivConfig, Equivalence};

#[test]
fn telephone_seed_yields_inventing_pattern() {
    let res = common::resources();
    let corpus = common::corpus("worked_example/corpus.json");
    let seeds = common::seeds("worked_example/seeds.json", &corpus);
    let acq = acquire_patterns(&seeds, &EquivConfig::acquisition(), &res, &default_wh_words(), 0);
    assert_eq!(acq.patterns.len(), 1, "{:?}", acq.report);
    let p = &acq.patterns[0];
    assert_eq!(p.pa.predicate.surface, "inventing");
    assert_eq!(acq.report.rejected_frames, vec![("telephone".to_string(), 0)]);
    assert!(p.check_invariants(&res));
    assert_eq!(p.alignment.total, 2.75);
}

#[test]
fn telephone_score_matrix_cells() {
    let res = common::resources();
    let corpus = common::corpus("worked_example/corpus.json");
    let seeds = common::seeds("worked_example/seeds.json", &corpus);
    let seed = &seeds[0];
    let qa: Vec<_> = seed.question.iter().cloned().chain(seed.answer_tokens()).collect();
    let cfg = EquivConfig::acquisition();
    let m = build_score_matrix(&qa, &seed.sentence, &Equivalence::new(&res, &cfg), &res.stopwords, &default_wh_words());
    assert_eq!(m.rows, vec![1, 3, 5]);
    assert_eq!(m.cols, vec![0, 2, 4, 6]);
    assert_eq!(m.get(1, 4), Some(0.75));
    assert_eq!(m.get(3, 6), Some(1.0));
    assert_eq!(m.get(5, 0), Some(1.0));
    let a = best_alignment(&m);
    let pairs: Vec<_> = a.pairs.iter().map(|p| (p.qa, p.s, p.score)).collect();
    assert_eq!(pairs, vec![(1, 4, 0.75), (3, 6, 1.0), (5, 0, 1.0)]);
}

#[test]
fn telephone_sentence_frames() {
    let corpus = common::corpus("worked_example/corpus.json");
    let pas = extract_predicate_arguments(&corpus[0]);
    assert_eq!(pas.len(), 2);
    assert_eq!(pas[0].predicate.surface, "credited");
    assert_eq!(pas[0].labels().collect::<Vec<_>>(), vec!["A1", "A2"]);
    let a1 = pas[1].argument("A1").unwrap();
    assert_eq!(a1.forest[0].render(&corpus[0].tokens), "(NP (DT the) (NN telephone))");
}

#[test]
fn vasco_questions_by_strategy() {
    let res = common::resources();
    let corpus = common::corpus("worked_example/corpus.json");
    let seeds = common::seeds("worked_example/seeds.json", &corpus);
    let acq = acquire_patterns(&seeds, &EquivConfig::acquisition(), &res, &default_wh_words(), 0);
    let p = &acq.patterns[0];
    let cfg = EquivConfig::generation();
    let vasco = &corpus[1];
    assert!(generate(p, vasco, &[MatchStrategy::Strict], &cfg, &res).is_empty());
    let qs = generate(p, vasco, &[MatchStrategy::Argument], &cfg, &res);
    assert_eq!(qs.len(), 1);
    assert_eq!(qs[0].question_text(), "Who discovered the sea route to India?");
    assert_eq!(qs[0].answer_text(), "Vasco Da Gama");
    let all = generate(p, vasco, &MatchStrategy::ALL, &cfg, &res);
    for q in &all {
        println!("{:?} {} / {}", q.strategy, q.question_text(), q.answer_text());
    }
}

#[test]
fn pattern_regenerates_its_seed_question() {
    let res = common::resources();
    let corpus = common::corpus("worked_example/corpus.json");
    let seeds = common::seeds("worked_example/seeds.json", &corpus);
    let acq = acquire_patterns(&seeds, &EquivConfig::acquisition(), &res, &default_wh_words(), 0);
    let qs = generate(&acq.patterns[0], &corpus[0], &MatchStrategy::ALL, &EquivConfig::generation(), &res);
    assert_eq!(qs[0].question_text(), "Who created the telephone?");
    assert_eq!(qs[0].strategy, MatchStrategy::Strict);
    assert_eq!(qs[0].answer_text(), "Alexander Graham Bell");
}
