//! Evaluation of ranked questions against multi-hypothesis references:
//! BLEU, ROUGE-L, overlap, normalized Levenshtein and the embedding-based
//! EACS / VECS / GMS.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feedback::{sim_levenshtein, sim_overlap};
use crate::resources::{cosine, EmbeddingTable};
use crate::text;

pub const ROUGE_BETA: f64 = 1.2;
pub const SCHEMA_VERSION: u32 = 1;

/// Acceptable questions per sentence id, as written.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub references: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReferenceFile {
    schema_version: u32,
    references: BTreeMap<String, Vec<String>>,
}

impl Reference {
    pub fn parse(text: &str) -> Result<Self> {
        let f: ReferenceFile = serde_json::from_str(text).map_err(|e| Error::Json {
            path: "<reference>".into(),
            source: e,
        })?;
        if f.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                found: f.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        Ok(Reference {
            references: f.references,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Reference::parse(&text).map_err(|e| match e {
            Error::Json { source, .. } => Error::Json {
                path: path.into(),
                source,
            },
            other => other,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = ReferenceFile {
            schema_version: SCHEMA_VERSION,
            references: self.references.clone(),
        };
        let text = serde_json::to_string_pretty(&f).map_err(|e| Error::Json {
            path: path.into(),
            source: e,
        })?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    /// Lowercased word lists for one sentence; empty when unknown.
    pub fn words(&self, sentence_id: &str) -> Vec<Vec<String>> {
        self.references
            .get(sentence_id)
            .map(|qs| qs.iter().map(|q| text::words([q.as_str()])).collect())
            .unwrap_or_default()
    }

    /// Every sentence id must exist in `ids`.
    pub fn check_ids<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<()> {
        let known: std::collections::HashSet<&str> = ids.into_iter().collect();
        for id in self.references.keys() {
            if !known.contains(id.as_str()) {
                return Err(Error::invalid(id, "references", "sentence id not in the corpus"));
            }
        }
        Ok(())
    }
}

fn ngram_counts(words: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut out = HashMap::new();
    if n == 0 || words.len() < n {
        return out;
    }
    for g in words.windows(n) {
        *out.entry(g).or_insert(0) += 1;
    }
    out
}

/// (clipped matches, candidate n-grams) of one candidate at one order.
fn clipped(candidate: &[String], refs: &[Vec<String>], n: usize) -> (usize, usize) {
    let cand = ngram_counts(candidate, n);
    let total = cand.values().sum();
    let mut max_ref: HashMap<&[String], usize> = HashMap::new();
    for r in refs {
        for (g, c) in ngram_counts(r, n) {
            let e = max_ref.entry(g).or_insert(0);
            *e = (*e).max(c);
        }
    }
    let hits = cand
        .iter()
        .map(|(g, c)| (*c).min(max_ref.get(g).copied().unwrap_or(0)))
        .sum();
    (hits, total)
}

/// Reference length closest to `c`, the shorter one on ties.
fn closest_ref_len(c: usize, refs: &[Vec<String>]) -> usize {
    refs.iter()
        .map(|r| r.len())
        .min_by_key(|&l| (l.abs_diff(c), l))
        .unwrap_or(0)
}

/// Corpus-level BLEU-n over (candidate, references) pairs: clipped n-gram
/// precisions for orders 1..=n, uniform geometric mean, brevity penalty
/// against the closest reference length. Orders for which no candidate has
/// any n-gram are left out of the mean.
pub fn bleu(pairs: &[(Vec<String>, Vec<Vec<String>>)], n: usize) -> Result<f64> {
    if !(1..=4).contains(&n) {
        return Err(Error::Config(format!("BLEU order {n} outside 1..=4")));
    }
    if pairs.is_empty() {
        return Err(Error::Empty("no candidates to score".into()));
    }
    let mut log_sum = 0.0;
    let mut orders = 0;
    for k in 1..=n {
        let (hits, total) = pairs
            .iter()
            .map(|(c, r)| clipped(c, r, k))
            .fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        if total == 0 {
            continue;
        }
        if hits == 0 {
            return Ok(0.0);
        }
        log_sum += (hits as f64 / total as f64).ln();
        orders += 1;
    }
    if orders == 0 {
        return Ok(0.0);
    }
    let c: usize = pairs.iter().map(|(c, _)| c.len()).sum();
    let r: usize = pairs.iter().map(|(c, refs)| closest_ref_len(c.len(), refs)).sum();
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    Ok(bp * (log_sum / orders as f64).exp())
}

pub fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0; b.len() + 1];
    let mut cur = vec![0; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// LCS F-measure (β = 1.2), maximized over the references.
pub fn rouge_l(candidate: &[String], references: &[Vec<String>]) -> f64 {
    references
        .iter()
        .map(|r| {
            let l = lcs_len(candidate, r);
            if l == 0 {
                return 0.0;
            }
            let p = l as f64 / candidate.len() as f64;
            let rec = l as f64 / r.len() as f64;
            let b2 = ROUGE_BETA * ROUGE_BETA;
            (1.0 + b2) * p * rec / (rec + b2 * p)
        })
        .fold(0.0, f64::max)
}

fn vectors(words: &[String], table: &EmbeddingTable) -> Vec<Vec<f64>> {
    words.iter().filter_map(|w| table.get(w).map(<[f64]>::to_vec)).collect()
}

fn mean_vector(vs: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; vs[0].len()];
    for v in vs {
        out.iter_mut().zip(v).for_each(|(o, x)| *o += x);
    }
    out.iter_mut().for_each(|o| *o /= vs.len() as f64);
    out
}

/// Per dimension, the value of largest magnitude.
fn extrema_vector(vs: &[Vec<f64>]) -> Vec<f64> {
    (0..vs[0].len())
        .map(|d| {
            vs.iter()
                .map(|v| v[d])
                .fold(0.0, |best: f64, x| if x.abs() > best.abs() { x } else { best })
        })
        .collect()
}

fn cos01(a: &[f64], b: &[f64]) -> f64 {
    cosine(a, b).unwrap_or(0.0).clamp(0.0, 1.0)
}

fn greedy(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| cos01(x, y)).fold(0.0, f64::max))
        .sum::<f64>()
        / a.len() as f64
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingScores {
    pub eacs: f64,
    pub vecs: f64,
    pub gms: f64,
}

/// Embedding average, vector extrema and greedy matching cosines, each
/// maximized over the references. Out-of-vocabulary words are skipped; a
/// side with no known word scores 0. Negative cosines count as 0.
pub fn embedding_metrics(candidate: &[String], references: &[Vec<String>], table: &EmbeddingTable) -> EmbeddingScores {
    let mut best = EmbeddingScores::default();
    let cv = vectors(candidate, table);
    if cv.is_empty() {
        warn!("no embedding for any word of `{}`", candidate.join(" "));
        return best;
    }
    for r in references {
        if r == candidate {
            return EmbeddingScores {
                eacs: 1.0,
                vecs: 1.0,
                gms: 1.0,
            };
        }
        let rv = vectors(r, table);
        if rv.is_empty() {
            continue;
        }
        best.eacs = best.eacs.max(cos01(&mean_vector(&cv), &mean_vector(&rv)));
        best.vecs = best.vecs.max(cos01(&extrema_vector(&cv), &extrema_vector(&rv)));
        best.gms = best.gms.max((greedy(&cv, &rv) + greedy(&rv, &cv)) / 2.0);
    }
    best
}

/// A ranked question to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub sentence_id: String,
    pub question: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricScores {
    /// BLEU against each candidate's own sentence references.
    pub bleu1: f64,
    pub bleu4: f64,
    /// BLEU against every reference of the evaluated set, pooled.
    pub bleu1_pooled: f64,
    pub bleu4_pooled: f64,
    pub rouge_l: f64,
    /// Mean best overlap coefficient to a reference.
    pub overlap: f64,
    /// Mean best normalized Levenshtein similarity to a reference.
    pub lev: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingScores>,
}

impl MetricScores {
    /// Field-wise mean; embedding scores only when every input has them.
    pub fn mean(all: &[MetricScores]) -> Option<MetricScores> {
        if all.is_empty() {
            return None;
        }
        let n = all.len() as f64;
        let avg = |f: fn(&MetricScores) -> f64| all.iter().map(f).sum::<f64>() / n;
        let embedding = all.iter().map(|m| m.embedding).collect::<Option<Vec<_>>>().map(|es| {
            let m = es.len() as f64;
            EmbeddingScores {
                eacs: es.iter().map(|e| e.eacs).sum::<f64>() / m,
                vecs: es.iter().map(|e| e.vecs).sum::<f64>() / m,
                gms: es.iter().map(|e| e.gms).sum::<f64>() / m,
            }
        });
        Some(MetricScores {
            bleu1: avg(|m| m.bleu1),
            bleu4: avg(|m| m.bleu4),
            bleu1_pooled: avg(|m| m.bleu1_pooled),
            bleu4_pooled: avg(|m| m.bleu4_pooled),
            rouge_l: avg(|m| m.rouge_l),
            overlap: avg(|m| m.overlap),
            lev: avg(|m| m.lev),
            embedding,
        })
    }
}

type Scorer = dyn Fn(&[String], &[Vec<String>]) -> f64;

/// Scores a set of questions (already tokenized into lowercase words) given
/// each one's references.
pub fn score_set(
    items: &[(Vec<String>, Vec<Vec<String>>)],
    table: Option<&EmbeddingTable>,
) -> Result<MetricScores> {
    if items.is_empty() {
        return Err(Error::Empty("no candidates to score".into()));
    }
    let mut pooled: Vec<Vec<String>> = items.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    pooled.sort();
    pooled.dedup();
    let pooled_pairs: Vec<(Vec<String>, Vec<Vec<String>>)> =
        items.iter().map(|(c, _)| (c.clone(), pooled.clone())).collect();
    let n = items.len() as f64;
    let mean = |f: &Scorer| items.iter().map(|(c, r)| f(c, r)).sum::<f64>() / n;
    let best = |sim: fn(&[String], &[String]) -> f64| {
        move |c: &[String], r: &[Vec<String>]| r.iter().map(|x| sim(c, x)).fold(0.0, f64::max)
    };
    let embedding = table.map(|t| {
        let es: Vec<EmbeddingScores> = items.iter().map(|(c, r)| embedding_metrics(c, r, t)).collect();
        EmbeddingScores {
            eacs: es.iter().map(|e| e.eacs).sum::<f64>() / n,
            vecs: es.iter().map(|e| e.vecs).sum::<f64>() / n,
            gms: es.iter().map(|e| e.gms).sum::<f64>() / n,
        }
    });
    Ok(MetricScores {
        bleu1: bleu(items, 1)?,
        bleu4: bleu(items, 4)?,
        bleu1_pooled: bleu(&pooled_pairs, 1)?,
        bleu4_pooled: bleu(&pooled_pairs, 4)?,
        rouge_l: mean(&|c, r| rouge_l(c, r)),
        overlap: mean(&best(sim_overlap)),
        lev: mean(&best(sim_levenshtein)),
        embedding,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutScores {
    pub cut: usize,
    /// Questions actually scored (fewer than `cut` when the list is short).
    pub scored: usize,
    pub truncated: bool,
    pub scores: Option<MetricScores>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub cuts: Vec<CutScores>,
    pub empty: bool,
}

/// Scores the top `cut` hypotheses of a ranked list for each cut. A cut
/// larger than the list scores the whole list and is flagged.
pub fn evaluate_topn(
    ranked: &[Hypothesis],
    reference: &Reference,
    cuts: &[usize],
    table: Option<&EmbeddingTable>,
) -> Result<MetricReport> {
    let items: Vec<(Vec<String>, Vec<Vec<String>>)> = ranked
        .iter()
        .map(|h| (text::words([h.question.as_str()]), reference.words(&h.sentence_id)))
        .collect();
    let mut report = MetricReport {
        cuts: Vec::new(),
        empty: items.is_empty(),
    };
    for &cut in cuts {
        let scored = cut.min(items.len());
        let scores = if scored == 0 {
            None
        } else {
            Some(score_set(&items[..scored], table)?)
        };
        report.cuts.push(CutScores {
            cut,
            scored,
            truncated: cut > items.len(),
            scores,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn bleu_identity_and_disjoint() {
        let c = w("who discovered the sea route to india ?");
        assert_eq!(bleu(&[(c.clone(), vec![c.clone()])], 4).unwrap(), 1.0);
        assert_eq!(bleu(&[(w("a b"), vec![w("c d")])], 1).unwrap(), 0.0);
        assert!(bleu(&[], 1).is_err());
    }

    #[test]
    fn bleu1_hand_count() {
        // 2 of 5 unigrams match; c=5 > r=3 so no brevity penalty.
        let b = bleu(&[(w("who discovered the sea route"), vec![w("who discovered america")])], 1).unwrap();
        assert!((b - 0.4).abs() < 1e-12);
        // c=3 < r=5: BP = exp(1 - 5/3), precision 2/3.
        let b = bleu(&[(w("who discovered america"), vec![w("who discovered the sea route")])], 1).unwrap();
        assert!((b - (2.0 / 3.0) * (1.0f64 - 5.0 / 3.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn short_candidates_drop_high_orders() {
        let c = w("a b");
        assert_eq!(bleu(&[(c.clone(), vec![c])], 4).unwrap(), 1.0);
    }

    #[test]
    fn rouge_from_lcs() {
        let r = rouge_l(&w("a b c d"), &[w("a c d e")]);
        let (p, rec) = (0.75, 0.75);
        let b2 = 1.44;
        assert!((r - (1.0 + b2) * p * rec / (rec + b2 * p)).abs() < 1e-12);
        assert_eq!(rouge_l(&w("a b"), &[w("c d")]), 0.0);
        assert_eq!(rouge_l(&w("a b"), &[w("c d"), w("a b")]), 1.0);
    }

    #[test]
    fn embedding_toy_cases() {
        let t = EmbeddingTable::parse("4 2\nx 1 0\ny 0 1\nz 1 1\nn -1 0\n").unwrap();
        let e = embedding_metrics(&w("x"), &[w("y")], &t);
        assert_eq!((e.eacs, e.vecs, e.gms), (0.0, 0.0, 0.0));
        let e = embedding_metrics(&w("x y"), &[w("x y")], &t);
        assert_eq!((e.eacs, e.vecs, e.gms), (1.0, 1.0, 1.0));
        // mean(x, y) = (0.5, 0.5) is parallel to z; extrema (1, 1) too;
        // greedy: x→z and y→z are 1/√2, z→x is 1/√2.
        let e = embedding_metrics(&w("x y"), &[w("z")], &t);
        let h = 0.5f64.sqrt();
        assert!((e.eacs - 1.0).abs() < 1e-12);
        assert!((e.vecs - 1.0).abs() < 1e-12);
        assert!((e.gms - h).abs() < 1e-12);
        // extrema keeps the sign of the largest magnitude.
        let e = embedding_metrics(&w("n y"), &[w("z")], &t);
        assert!(e.vecs.abs() < 1e-12);
        assert_eq!(embedding_metrics(&w("qq"), &[w("x")], &t), EmbeddingScores::default());
    }

    #[test]
    fn topn_flags_short_lists() {
        let mut reference = Reference::default();
        reference.references.insert("s".into(), vec!["Who discovered America ?".into()]);
        let ranked = vec![Hypothesis {
            sentence_id: "s".into(),
            question: "Who discovered America?".into(),
        }];
        let r = evaluate_topn(&ranked, &reference, &[1, 5], None).unwrap();
        let s = r.cuts[0].scores.unwrap();
        assert_eq!((s.bleu1, s.bleu4, s.rouge_l, s.lev, s.overlap), (1.0, 1.0, 1.0, 1.0, 1.0));
        assert!(!r.cuts[0].truncated && r.cuts[1].truncated);
        let empty = evaluate_topn(&[], &reference, &[5], None).unwrap();
        assert!(empty.empty && empty.cuts[0].scores.is_none());
    }
}
