//! Reviewer feedback: question similarity, pattern re-weighting (WMA and
//! EWAF), seed harvesting and pruning.

use std::collections::{BTreeMap, HashMap, HashSet};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::acquisition::{Pattern, PatternWeight, WeightUpdate};
use crate::annotation::{is_wh_word, AnnotatedSentence, Answer, Seed, Token};
use crate::error::{Error, Result};
use crate::generation::GeneratedQuestion;
use crate::text;

/// Similarity floor for EWAF; also the similarity of a discarded question.
pub const EWAF_SIM_FLOOR: f64 = 0.05;

/// Overlap coefficient over distinct lowercased words.
pub fn sim_overlap(q1: &[String], q2: &[String]) -> f64 {
    let a: HashSet<String> = q1.iter().map(|w| w.to_lowercase()).collect();
    let b: HashSet<String> = q2.iter().map(|w| w.to_lowercase()).collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let denom = a.len().min(b.len());
    if denom == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / denom as f64
}

/// Word-level edit distance with unit costs, case-insensitive.
pub fn word_edit_distance(q1: &[String], q2: &[String]) -> usize {
    let b: Vec<String> = q2.iter().map(|w| w.to_lowercase()).collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, wa) in q1.iter().enumerate() {
        let wa = wa.to_lowercase();
        cur[0] = i + 1;
        for (j, wb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(wa != *wb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// 1 − edit distance / length of the longer question.
pub fn sim_levenshtein(q1: &[String], q2: &[String]) -> f64 {
    let longest = q1.len().max(q2.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - word_edit_distance(q1, q2) as f64 / longest as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeighingStrategy {
    Wma,
    Ewaf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimKind {
    Overlap,
    #[serde(alias = "levenshtein")]
    Lev,
}

impl SimKind {
    pub fn score(self, q1: &[String], q2: &[String]) -> f64 {
        match self {
            SimKind::Overlap => sim_overlap(q1, q2),
            SimKind::Lev => sim_levenshtein(q1, q2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeighingConfig {
    pub strategy: WeighingStrategy,
    pub sim: SimKind,
    /// Success threshold (WMA only).
    pub th: f64,
    pub penalty: f64,
    /// Success bonus (WMA only).
    pub bonus: f64,
}

impl WeighingConfig {
    pub fn wma(sim: SimKind, th: f64, penalty: f64, bonus: f64) -> Self {
        WeighingConfig {
            strategy: WeighingStrategy::Wma,
            sim,
            th,
            penalty,
            bonus,
        }
    }

    pub fn ewaf(sim: SimKind, penalty: f64) -> Self {
        WeighingConfig {
            strategy: WeighingStrategy::Ewaf,
            sim,
            th: 1.0,
            penalty,
            bonus: 0.0,
        }
    }

    /// Range checks. EWAF ignores `th` and `bonus`, so only a warning is
    /// logged when they carry non-default values.
    pub fn validate(&self) -> Result<()> {
        if !(self.penalty > 0.0 && self.penalty < 1.0) {
            return Err(Error::Config(format!("penalty {} outside (0, 1)", self.penalty)));
        }
        match self.strategy {
            WeighingStrategy::Wma => {
                if !(self.th > 0.0 && self.th <= 1.0) {
                    return Err(Error::Config(format!("th {} outside (0, 1]", self.th)));
                }
                if !(0.0..1.0).contains(&self.bonus) {
                    return Err(Error::Config(format!("bonus {} outside [0, 1)", self.bonus)));
                }
            }
            WeighingStrategy::Ewaf => {
                if self.th != 1.0 || self.bonus != 0.0 {
                    warn!("th and bonus are not used by EWAF and are ignored");
                }
            }
        }
        Ok(())
    }
}

impl Default for WeighingConfig {
    fn default() -> Self {
        WeighingConfig::ewaf(SimKind::Overlap, 0.1)
    }
}

pub fn successful(q_gen: &[String], q_corr: &[String], cfg: &WeighingConfig) -> bool {
    cfg.sim.score(q_gen, q_corr) > cfg.th
}

fn push(w: &PatternWeight, question_id: &str, sim: f64, new_w: f64) -> PatternWeight {
    let mut out = w.clone();
    out.w = new_w;
    out.history.push(WeightUpdate {
        question_id: question_id.to_string(),
        sim,
        w: new_w,
    });
    out
}

/// WMA step. `q_corr` is `None` for a discarded question, which counts as
/// unsuccessful.
pub fn update_wma(
    w: &PatternWeight,
    question_id: &str,
    q_gen: &[String],
    q_corr: Option<&[String]>,
    cfg: &WeighingConfig,
) -> PatternWeight {
    let sim = q_corr.map_or(0.0, |c| cfg.sim.score(q_gen, c));
    let new_w = if q_corr.is_some() && sim > cfg.th {
        w.w / (1.0 - cfg.bonus)
    } else {
        w.w * (1.0 - cfg.penalty)
    };
    push(w, question_id, sim, new_w)
}

/// EWAF step: w·exp(−l / sim), sim floored at [`EWAF_SIM_FLOOR`].
pub fn update_ewaf(
    w: &PatternWeight,
    question_id: &str,
    q_gen: &[String],
    q_corr: Option<&[String]>,
    cfg: &WeighingConfig,
) -> PatternWeight {
    let sim = q_corr
        .map_or(EWAF_SIM_FLOOR, |c| cfg.sim.score(q_gen, c))
        .max(EWAF_SIM_FLOOR);
    let new_w = w.w * (-cfg.penalty / sim).exp();
    push(w, question_id, sim, new_w)
}

pub fn update_weight(
    w: &PatternWeight,
    question_id: &str,
    q_gen: &[String],
    q_corr: Option<&[String]>,
    cfg: &WeighingConfig,
) -> PatternWeight {
    match cfg.strategy {
        WeighingStrategy::Wma => update_wma(w, question_id, q_gen, q_corr, cfg),
        WeighingStrategy::Ewaf => update_ewaf(w, question_id, q_gen, q_corr, cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewAction {
    Kept,
    Edited,
    Discarded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewDecision {
    pub question_id: String,
    pub action: ReviewAction,
    /// Tokenized correction; absent only for discards.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected_text: Option<Vec<String>>,
    /// The reviewer rewrote the question into a different question type.
    /// Harvested as a seed, weighed as a discard.
    #[serde(default)]
    pub type_changed: bool,
}

impl ReviewDecision {
    pub fn kept(q: &GeneratedQuestion) -> Self {
        ReviewDecision {
            question_id: q.id.clone(),
            action: ReviewAction::Kept,
            corrected_text: Some(q.text.clone()),
            type_changed: false,
        }
    }

    pub fn edited(question_id: &str, corrected: &str) -> Self {
        ReviewDecision {
            question_id: question_id.to_string(),
            action: ReviewAction::Edited,
            corrected_text: Some(text::tokenize(corrected)),
            type_changed: false,
        }
    }

    pub fn discarded(question_id: &str) -> Self {
        ReviewDecision {
            question_id: question_id.to_string(),
            action: ReviewAction::Discarded,
            corrected_text: None,
            type_changed: false,
        }
    }

    pub fn with_type_changed(mut self) -> Self {
        self.type_changed = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let id = self.question_id.as_str();
        match (self.action, &self.corrected_text) {
            (ReviewAction::Discarded, Some(_)) => {
                Err(Error::invalid(id, "corrected_text", "a discarded question carries no correction"))
            }
            (ReviewAction::Edited, None) => Err(Error::invalid(id, "corrected_text", "an edit needs a correction")),
            (ReviewAction::Edited, Some(t)) if t.is_empty() => {
                Err(Error::invalid(id, "corrected_text", "empty correction"))
            }
            (ReviewAction::Discarded, None) if self.type_changed => {
                Err(Error::invalid(id, "type_changed", "a discarded question has no new type"))
            }
            _ => Ok(()),
        }
    }

    /// The reviewer's final text; a keep without explicit text keeps the
    /// generated question.
    pub fn correction(&self, q: &GeneratedQuestion) -> Option<Vec<String>> {
        match self.action {
            ReviewAction::Discarded => None,
            _ => Some(self.corrected_text.clone().unwrap_or_else(|| q.text.clone())),
        }
    }

    /// Correction seen by the weighing step: type changes count as discards.
    pub fn weighing_outcome(&self, q: &GeneratedQuestion) -> Option<Vec<String>> {
        if self.type_changed {
            None
        } else {
            self.correction(q)
        }
    }
}

/// Lowercased words of a token list, the unit every similarity runs on.
pub fn question_words(tokens: &[String]) -> Vec<String> {
    text::words(tokens.iter().map(String::as_str))
}

/// Applies every decision's weight update to its pattern, in decision order.
/// Decisions for unknown questions or patterns are skipped with a warning.
pub fn weigh_patterns(
    pool: &mut [Pattern],
    questions: &[GeneratedQuestion],
    decisions: &[ReviewDecision],
    cfg: &WeighingConfig,
) {
    let by_id: HashMap<&str, &GeneratedQuestion> = questions.iter().map(|q| (q.id.as_str(), q)).collect();
    let slot: HashMap<String, usize> = pool.iter().enumerate().map(|(i, p)| (p.id.clone(), i)).collect();
    for d in decisions {
        let Some(q) = by_id.get(d.question_id.as_str()) else {
            warn!("decision for unknown question `{}`", d.question_id);
            continue;
        };
        let Some(&pi) = slot.get(&q.pattern_id) else {
            warn!("question `{}` refers to unknown pattern `{}`", q.id, q.pattern_id);
            continue;
        };
        let gen = question_words(&q.text);
        let corr = d.weighing_outcome(q).map(|c| question_words(&c));
        pool[pi].weight = update_weight(&pool[pi].weight, &q.id, &gen, corr.as_deref(), cfg);
    }
}

/// Longest run of correction words starting at `start` that spells a
/// vocabulary token, returned as (word count, token).
fn collapse<'a>(words: &[String], start: usize, vocab: &[&'a Token]) -> Option<(usize, &'a Token)> {
    let mut best: Option<(usize, &Token)> = None;
    for t in vocab {
        let tw = text::words([t.surface.as_str()]);
        let n = tw.len();
        if n == 0 || start + n > words.len() {
            continue;
        }
        let hit = tw.iter().zip(&words[start..start + n]).all(|(a, b)| *a == b.to_lowercase());
        if hit && best.is_none_or(|(bn, _)| n > bn) {
            best = Some((n, t));
        }
    }
    best
}

/// Annotates a tokenized correction: multi-word mentions are re-collapsed and
/// inherit the annotations of the vocabulary token they spell (sentence
/// tokens first, then the generating pattern's question); other words pass
/// through with lemma = lowercased surface and POS `X`.
pub fn annotate_correction(words: &[String], sentence: &AnnotatedSentence, extra: &[Token]) -> Vec<Token> {
    let vocab: Vec<&Token> = sentence.tokens.iter().chain(extra).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let index = out.len();
        match collapse(words, i, &vocab) {
            Some((n, t)) => {
                let surface = if n == 1 { words[i].clone() } else { t.surface.clone() };
                out.push(Token {
                    index,
                    surface,
                    ..t.clone()
                });
                i += n;
            }
            None => {
                out.push(Token::new(index, &words[i], "X"));
                i += 1;
            }
        }
    }
    out
}

fn answer_from_indices(sentence: &AnnotatedSentence, idx: &[usize]) -> Option<Answer> {
    let (&lo, &hi) = (idx.first()?, idx.last()?);
    if hi - lo + 1 == idx.len() {
        Some(Answer::Span { start: lo, end: hi })
    } else {
        Some(Answer::Tokens(
            idx.iter()
                .enumerate()
                .map(|(k, &i)| Token {
                    index: k,
                    ..sentence.tokens[i].clone()
                })
                .collect(),
        ))
    }
}

/// One new seed per non-discarded decision: the correction paired with the
/// question's source sentence and its generated answer. Corrections that no
/// longer open with a Wh-word cannot seed a pattern and are skipped.
pub fn harvest_seeds(
    decisions: &[ReviewDecision],
    questions: &[GeneratedQuestion],
    sentences: &[AnnotatedSentence],
    pool: &[Pattern],
    wh_words: &[String],
) -> Vec<Seed> {
    let by_id: HashMap<&str, &GeneratedQuestion> = questions.iter().map(|q| (q.id.as_str(), q)).collect();
    let sentence_by_id: HashMap<&str, &AnnotatedSentence> = sentences.iter().map(|s| (s.id.as_str(), s)).collect();
    let question_vocab: HashMap<&str, &[Token]> = pool.iter().map(|p| (p.id.as_str(), p.question.as_slice())).collect();
    let mut seeds = Vec::new();
    for d in decisions {
        let Some(q) = by_id.get(d.question_id.as_str()) else {
            continue;
        };
        let Some(words) = d.correction(q) else {
            continue;
        };
        let Some(sentence) = sentence_by_id.get(q.sentence_id.as_str()) else {
            warn!("question `{}` has no source sentence `{}`", q.id, q.sentence_id);
            continue;
        };
        let words: Vec<String> = words.iter().flat_map(|w| text::tokenize(w)).collect();
        if words.first().is_none_or(|w| !is_wh_word(w, wh_words)) {
            warn!("correction of `{}` does not open with a Wh-word; not harvested", q.id);
            continue;
        }
        let Some(answer) = answer_from_indices(sentence, &q.answer_indices) else {
            continue;
        };
        let extra = question_vocab.get(q.pattern_id.as_str()).copied().unwrap_or(&[]);
        seeds.push(Seed {
            id: q.id.clone(),
            sentence: (*sentence).clone(),
            question: annotate_correction(&words, sentence, extra),
            answer,
        });
    }
    seeds
}

/// Drops every pattern whose batch questions were all discarded. Patterns
/// without questions this batch stay; type changes do not count as discards.
/// Returns the surviving pool and the removed ids.
pub fn prune_patterns(
    pool: Vec<Pattern>,
    questions: &[GeneratedQuestion],
    decisions: &[ReviewDecision],
) -> (Vec<Pattern>, Vec<String>) {
    let action: HashMap<&str, ReviewAction> =
        decisions.iter().map(|d| (d.question_id.as_str(), d.action)).collect();
    // pattern id -> (questions, discarded)
    let mut tally: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for q in questions {
        let e = tally.entry(q.pattern_id.as_str()).or_default();
        e.0 += 1;
        if action.get(q.id.as_str()) == Some(&ReviewAction::Discarded) {
            e.1 += 1;
        }
    }
    let dead: HashSet<String> = tally
        .into_iter()
        .filter(|(_, (n, d))| *n > 0 && n == d)
        .map(|(id, _)| id.to_string())
        .collect();
    let mut removed = Vec::new();
    let kept = pool
        .into_iter()
        .filter(|p| {
            let drop = dead.contains(&p.id);
            if drop {
                removed.push(p.id.clone());
            }
            !drop
        })
        .collect();
    (kept, removed)
}
