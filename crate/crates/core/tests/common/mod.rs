#![allow(dead_code)]

use std::path::PathBuf;

use gen_core::annotation::{default_wh_words, load_corpus, load_seeds_with, AnnotatedSentence, Seed};
use gen_core::resources::Resources;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

pub fn resources() -> Resources {
    Resources::load_dir(fixture("resources")).expect("fixture resources")
}

pub fn corpus(rel: &str) -> Vec<AnnotatedSentence> {
    load_corpus(fixture(rel)).expect("fixture corpus")
}

pub fn seeds(rel: &str, corpus: &[AnnotatedSentence]) -> Vec<Seed> {
    load_seeds_with(fixture(rel), corpus, &default_wh_words()).expect("fixture seeds")
}

pub fn synthetic_context(
    harvest: bool,
    shuffle_seed: Option<u64>,
    weighing: gen_core::feedback::WeighingConfig,
) -> std::sync::Arc<gen_core::orchestration::SessionContext> {
    use gen_core::orchestration::{SessionConfig, SessionContext};
    let corpus = corpus("synthetic/corpus.json");
    let seeds = seeds("synthetic/seeds.json", &corpus);
    let cfg = SessionConfig {
        batch_size: 5,
        shuffle_seed,
        weighing,
        harvest,
        ..SessionConfig::default()
    };
    std::sync::Arc::new(SessionContext::new(corpus, seeds, std::sync::Arc::new(resources()), cfg).unwrap())
}

pub fn synthetic_reference() -> gen_core::metrics::Reference {
    gen_core::metrics::Reference::load(fixture("synthetic/reference.json")).unwrap()
}
