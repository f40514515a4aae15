//! The batch loop: acquire, generate, review, harvest, weigh, prune.
//!
//! A [`Session`] is driven by three commands (start, decide, advance), each
//! of which yields an [`Event`]. Replaying the events against the same
//! context rebuilds the state exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::acquisition::{acquire_patterns, content_hash, AcquisitionReport, Pattern};
use crate::annotation::{default_wh_words, AnnotatedSentence, Seed};
use crate::error::{Error, Result};
use crate::feedback::{
    harvest_seeds, prune_patterns, question_words, sim_levenshtein, weigh_patterns, ReviewAction, ReviewDecision,
    WeighingConfig,
};
use crate::generation::{generate, GeneratedQuestion, MatchStrategy};
use crate::metrics::{evaluate_topn, Hypothesis, MetricScores, Reference};
use crate::resources::{EmbeddingTable, Resources};
use crate::similarity::EquivConfig;
use crate::text;

pub const DEFAULT_ACCEPT_THRESHOLD: f64 = 0.6;
/// Random orderings averaged by the unweighted ranking baseline.
pub const RANDOM_BASELINE_ORDERINGS: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchPlan {
    pub batch_size: usize,
    pub shuffle_seed: Option<u64>,
    pub batches: Vec<Vec<String>>,
}

impl BatchPlan {
    pub fn len(&self) -> usize {
        self.batches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.batches.is_empty()
    }
}

/// Splits the corpus into consecutive batches; the remainder forms a last,
/// smaller batch. With a seed the ids are shuffled first.
pub fn plan_batches(corpus: &[AnnotatedSentence], batch_size: usize, shuffle_seed: Option<u64>) -> Result<BatchPlan> {
    if batch_size == 0 {
        return Err(Error::Config("batch size must be at least 1".into()));
    }
    if corpus.is_empty() {
        return Err(Error::Empty("corpus has no sentences".into()));
    }
    let mut ids: Vec<String> = corpus.iter().map(|s| s.id.clone()).collect();
    if let Some(seed) = shuffle_seed {
        ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    Ok(BatchPlan {
        batch_size,
        shuffle_seed,
        batches: ids.chunks(batch_size).map(<[String]>::to_vec).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub batch_size: usize,
    #[serde(default)]
    pub shuffle_seed: Option<u64>,
    pub equiv: EquivConfig,
    pub strategies: Vec<MatchStrategy>,
    pub weighing: WeighingConfig,
    /// Turn reviewed questions into new seeds.
    pub harvest: bool,
    pub prune: bool,
    pub wh_words: Vec<String>,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            batch_size: 10,
            shuffle_seed: None,
            equiv: EquivConfig::acquisition(),
            strategies: MatchStrategy::ALL.to_vec(),
            weighing: WeighingConfig::default(),
            harvest: true,
            prune: true,
            wh_words: default_wh_words(),
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("no matching strategy enabled".into()));
        }
        if self.wh_words.is_empty() {
            return Err(Error::Config("empty Wh-word list".into()));
        }
        self.equiv.validate()?;
        self.weighing.validate()
    }
}

/// One row of the per-batch table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub batch: usize,
    /// Pool size the batch was generated with.
    pub patterns: usize,
    /// Patterns added when the batch opened.
    pub new: usize,
    pub questions: usize,
    /// Distinct (sentence, text) pairs.
    pub unique: usize,
    pub discarded: usize,
    pub discarded_pct: f64,
    /// Mean normalized word edit distance of non-discarded questions.
    pub edit_avg: f64,
}

impl BatchStats {
    pub const COLUMNS: [&'static str; 8] =
        ["batch", "patterns", "new", "questions", "unique", "discarded", "%", "edit avg"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchRecord {
    pub index: usize,
    pub sentence_ids: Vec<String>,
    pub pool_size: usize,
    pub new_patterns: Vec<String>,
    pub acquisition: AcquisitionReport,
    /// Ranked as presented to the reviewer.
    pub questions: Vec<GeneratedQuestion>,
    /// In submission order.
    pub decisions: Vec<ReviewDecision>,
    #[serde(default)]
    pub harvested: Vec<String>,
    #[serde(default)]
    pub pruned: Vec<String>,
}

impl BatchRecord {
    pub fn decision(&self, question_id: &str) -> Option<&ReviewDecision> {
        self.decisions.iter().find(|d| d.question_id == question_id)
    }

    pub fn undecided(&self) -> Vec<String> {
        let done: HashSet<&str> = self.decisions.iter().map(|d| d.question_id.as_str()).collect();
        self.questions
            .iter()
            .filter(|q| !done.contains(q.id.as_str()))
            .map(|q| q.id.clone())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    Reviewing,
    Complete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub status: SessionStatus,
    pub pool: Vec<Pattern>,
    /// Content hashes of every pattern ever admitted, pruned ones included.
    pub seen: BTreeSet<String>,
    /// Seeds waiting for the next acquisition.
    pub pending_seeds: Vec<Seed>,
    pub current: Option<BatchRecord>,
    pub history: Vec<BatchRecord>,
    pub stats: Vec<BatchStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchOpened {
    pub batch: usize,
    pub sentence_ids: Vec<String>,
    pub new_patterns: Vec<String>,
    pub question_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    Started {
        opened: BatchOpened,
    },
    Decision {
        decision: ReviewDecision,
    },
    Advanced {
        batch: usize,
        harvested: Vec<String>,
        /// Final weight of every pattern updated by the batch.
        weights: BTreeMap<String, f64>,
        pruned: Vec<String>,
        stats: BatchStats,
        next: Option<BatchOpened>,
    },
}

/// Immutable inputs of a session.
#[derive(Debug, Clone)]
pub struct SessionContext {
    pub corpus: Vec<AnnotatedSentence>,
    pub seeds: Vec<Seed>,
    pub resources: Arc<Resources>,
    pub config: SessionConfig,
    pub plan: BatchPlan,
}

impl SessionContext {
    pub fn new(
        corpus: Vec<AnnotatedSentence>,
        seeds: Vec<Seed>,
        resources: Arc<Resources>,
        config: SessionConfig,
    ) -> Result<Self> {
        config.validate()?;
        let plan = plan_batches(&corpus, config.batch_size, config.shuffle_seed)?;
        Ok(SessionContext {
            corpus,
            seeds,
            resources,
            config,
            plan,
        })
    }
}

/// Stable sort by descending pattern weight: equal weights keep generation
/// order. Sets each question's rank score to its pattern's weight.
pub fn rank_questions(mut questions: Vec<GeneratedQuestion>, pool: &[Pattern]) -> Vec<GeneratedQuestion> {
    let w: HashMap<&str, f64> = pool.iter().map(|p| (p.id.as_str(), p.weight.w)).collect();
    for q in &mut questions {
        q.rank_score = w.get(q.pattern_id.as_str()).copied().unwrap_or(0.0);
    }
    questions.sort_by(|a, b| b.rank_score.total_cmp(&a.rank_score));
    questions
}

/// Seeded random ordering, the unweighted baseline.
pub fn random_order(questions: &[GeneratedQuestion], seed: u64) -> Vec<GeneratedQuestion> {
    let mut out = questions.to_vec();
    out.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    out
}

/// Stands in for the reviewer in unattended runs.
pub trait Oracle {
    fn decide(&self, q: &GeneratedQuestion) -> ReviewDecision;
}

/// Corrects a question to its closest reference question (by normalized
/// Levenshtein) when that is at least `threshold` similar, otherwise
/// discards it. A correction opening with a different Wh-word is a type
/// change.
#[derive(Debug, Clone)]
pub struct ReferenceOracle {
    pub reference: Reference,
    pub threshold: f64,
}

impl ReferenceOracle {
    pub fn new(reference: Reference) -> Self {
        ReferenceOracle {
            reference,
            threshold: DEFAULT_ACCEPT_THRESHOLD,
        }
    }
}

impl Oracle for ReferenceOracle {
    fn decide(&self, q: &GeneratedQuestion) -> ReviewDecision {
        let gen = question_words(&q.text);
        let mut best: Option<(f64, &String)> = None;
        for r in self.reference.references.get(&q.sentence_id).into_iter().flatten() {
            let s = sim_levenshtein(&gen, &text::words([r.as_str()]));
            if best.is_none_or(|(b, _)| s > b) {
                best = Some((s, r));
            }
        }
        match best {
            Some((s, r)) if s >= self.threshold => {
                let words = text::words([r.as_str()]);
                if words == gen {
                    return ReviewDecision::kept(q);
                }
                let d = ReviewDecision::edited(&q.id, r);
                if words.first() != gen.first() {
                    d.with_type_changed()
                } else {
                    d
                }
            }
            _ => ReviewDecision::discarded(&q.id),
        }
    }
}

/// Decisions from a closure, for scripted runs.
pub struct ScriptedOracle<F>(pub F);

impl<F: Fn(&GeneratedQuestion) -> ReviewDecision> Oracle for ScriptedOracle<F> {
    fn decide(&self, q: &GeneratedQuestion) -> ReviewDecision {
        (self.0)(q)
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    ctx: Arc<SessionContext>,
    state: SessionState,
}

impl Session {
    /// Acquires the initial patterns and opens the first batch.
    pub fn start(ctx: Arc<SessionContext>) -> Result<(Session, Event)> {
        ctx.config.validate()?;
        if ctx.seeds.is_empty() {
            warn!("session starts without seeds; no pattern can be acquired");
        }
        let mut state = SessionState {
            status: SessionStatus::Reviewing,
            pool: Vec::new(),
            seen: BTreeSet::new(),
            pending_seeds: ctx.seeds.clone(),
            current: None,
            history: Vec::new(),
            stats: Vec::new(),
        };
        let opened = open_batch(&ctx, &mut state, 0);
        Ok((Session { ctx, state }, Event::Started { opened }))
    }

    /// Continues from a saved state, e.g. a snapshot.
    pub fn resume(ctx: Arc<SessionContext>, state: SessionState) -> Session {
        Session { ctx, state }
    }

    /// Rebuilds a session from its event log, checking every recorded
    /// outcome against the recomputed one.
    pub fn replay(ctx: Arc<SessionContext>, events: &[Event]) -> Result<Session> {
        let Some((first, rest)) = events.split_first() else {
            return Err(Error::Empty("event log is empty".into()));
        };
        let (mut session, started) = Session::start(ctx)?;
        if *first != started {
            return Err(Error::Conflict("recorded start does not match the session inputs".into()));
        }
        for e in rest {
            session.apply(e)?;
        }
        Ok(session)
    }

    pub fn apply(&mut self, e: &Event) -> Result<()> {
        match e {
            Event::Started { .. } => Err(Error::Conflict("start event in the middle of a log".into())),
            Event::Decision { decision } => self.submit(decision.clone()).map(|_| ()),
            Event::Advanced { .. } => {
                let produced = self.advance()?;
                if produced != *e {
                    return Err(Error::Conflict(
                        "replayed advance differs from the recorded one".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn context(&self) -> &Arc<SessionContext> {
        &self.ctx
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    pub fn is_complete(&self) -> bool {
        self.state.status == SessionStatus::Complete
    }

    pub fn current_batch(&self) -> Option<&BatchRecord> {
        self.state.current.as_ref()
    }

    /// Records a decision. Re-sending an identical decision is a no-op
    /// (`None`); a different one for an already decided question is a
    /// conflict.
    pub fn submit(&mut self, decision: ReviewDecision) -> Result<Option<Event>> {
        decision.validate()?;
        let cur = self.state.current.as_mut().ok_or(Error::Finished)?;
        if !cur.questions.iter().any(|q| q.id == decision.question_id) {
            return Err(Error::NotFound(format!("question `{}`", decision.question_id)));
        }
        if let Some(prev) = cur.decision(&decision.question_id) {
            if *prev == decision {
                return Ok(None);
            }
            return Err(Error::Conflict(format!(
                "question `{}` already has a different decision",
                decision.question_id
            )));
        }
        cur.decisions.push(decision.clone());
        Ok(Some(Event::Decision { decision }))
    }

    /// Harvests, weighs, prunes and opens the next batch, all or nothing.
    pub fn advance(&mut self) -> Result<Event> {
        let cur = self.state.current.as_ref().ok_or(Error::Finished)?;
        let undecided = cur.undecided();
        if !undecided.is_empty() {
            return Err(Error::Undecided(undecided));
        }
        let ctx = &self.ctx;
        let cfg = &ctx.config;
        let mut next = self.state.clone();
        let mut record = next.current.take().expect("checked above");

        let sentences = batch_sentences(ctx, &record.sentence_ids);
        if cfg.harvest {
            let seeds = harvest_seeds(&record.decisions, &record.questions, &sentences, &next.pool, &cfg.wh_words);
            record.harvested = seeds.iter().map(|s| s.id.clone()).collect();
            next.pending_seeds.extend(seeds);
        }

        weigh_patterns(&mut next.pool, &record.questions, &record.decisions, &cfg.weighing);
        let touched: HashSet<&str> = record.questions.iter().map(|q| q.pattern_id.as_str()).collect();
        let weights: BTreeMap<String, f64> = next
            .pool
            .iter()
            .filter(|p| touched.contains(p.id.as_str()))
            .map(|p| (p.id.clone(), p.weight.w))
            .collect();

        if cfg.prune {
            let (kept, removed) = prune_patterns(std::mem::take(&mut next.pool), &record.questions, &record.decisions);
            next.pool = kept;
            record.pruned = removed;
        }

        let stats = batch_stats(&record);
        next.stats.push(stats.clone());
        let batch = record.index;
        let harvested = record.harvested.clone();
        let pruned = record.pruned.clone();
        next.history.push(record);

        let opened = if batch + 1 < ctx.plan.len() {
            Some(open_batch(ctx, &mut next, batch + 1))
        } else {
            next.status = SessionStatus::Complete;
            None
        };
        self.state = next;
        Ok(Event::Advanced {
            batch,
            harvested,
            weights,
            pruned,
            stats,
            next: opened,
        })
    }
}

fn batch_sentences(ctx: &SessionContext, ids: &[String]) -> Vec<AnnotatedSentence> {
    let by_id: HashMap<&str, &AnnotatedSentence> = ctx.corpus.iter().map(|s| (s.id.as_str(), s)).collect();
    ids.iter().filter_map(|id| by_id.get(id.as_str()).map(|s| (*s).clone())).collect()
}

fn open_batch(ctx: &SessionContext, state: &mut SessionState, index: usize) -> BatchOpened {
    let cfg = &ctx.config;
    let res = ctx.resources.as_ref();
    let acq = acquire_patterns(&state.pending_seeds, &cfg.equiv, res, &cfg.wh_words, index);
    state.pending_seeds.clear();
    let mut new_patterns = Vec::new();
    for p in acq.patterns {
        if state.seen.insert(content_hash(&p.id).to_string()) {
            new_patterns.push(p.id.clone());
            state.pool.push(p);
        }
    }

    let sentence_ids = ctx.plan.batches[index].clone();
    let sentences = batch_sentences(ctx, &sentence_ids);
    let mut questions = Vec::new();
    for p in &state.pool {
        for s in &sentences {
            questions.extend(generate(p, s, &cfg.strategies, &cfg.equiv, res));
        }
    }
    for (i, q) in questions.iter_mut().enumerate() {
        q.id = format!("b{index}-q{i}");
    }
    let questions = rank_questions(questions, &state.pool);
    let opened = BatchOpened {
        batch: index,
        sentence_ids: sentence_ids.clone(),
        new_patterns: new_patterns.clone(),
        question_ids: questions.iter().map(|q| q.id.clone()).collect(),
    };
    state.current = Some(BatchRecord {
        index,
        sentence_ids,
        pool_size: state.pool.len(),
        new_patterns,
        acquisition: acq.report,
        questions,
        decisions: Vec::new(),
        harvested: Vec::new(),
        pruned: Vec::new(),
    });
    opened
}

/// Distinct (sentence, lowercased text) pairs.
fn unique_count(questions: &[GeneratedQuestion]) -> usize {
    questions
        .iter()
        .map(|q| (q.sentence_id.as_str(), q.question_text().to_lowercase()))
        .collect::<HashSet<_>>()
        .len()
}

pub fn batch_stats(record: &BatchRecord) -> BatchStats {
    let by_id: HashMap<&str, &GeneratedQuestion> = record.questions.iter().map(|q| (q.id.as_str(), q)).collect();
    let mut discarded = 0;
    let mut edits = Vec::new();
    for d in &record.decisions {
        let Some(q) = by_id.get(d.question_id.as_str()) else {
            continue;
        };
        match d.correction(q) {
            None => discarded += 1,
            Some(c) => edits.push(1.0 - sim_levenshtein(&question_words(&q.text), &question_words(&c))),
        }
    }
    debug_assert_eq!(
        discarded,
        record.decisions.iter().filter(|d| d.action == ReviewAction::Discarded).count()
    );
    let questions = record.questions.len();
    BatchStats {
        batch: record.index,
        patterns: record.pool_size,
        new: record.new_patterns.len(),
        questions,
        unique: unique_count(&record.questions),
        discarded,
        discarded_pct: if questions == 0 {
            0.0
        } else {
            100.0 * discarded as f64 / questions as f64
        },
        edit_avg: if edits.is_empty() {
            0.0
        } else {
            edits.iter().sum::<f64>() / edits.len() as f64
        },
    }
}

/// Decides every pending question with the oracle, then advances.
pub fn run_iteration(session: &mut Session, oracle: &dyn Oracle) -> Result<(Vec<Event>, BatchStats)> {
    let cur = session.current_batch().ok_or(Error::Finished)?;
    let pending: Vec<GeneratedQuestion> = cur
        .questions
        .iter()
        .filter(|q| cur.decision(&q.id).is_none())
        .cloned()
        .collect();
    let mut events = Vec::new();
    for q in &pending {
        if let Some(e) = session.submit(oracle.decide(q))? {
            events.push(e);
        }
    }
    let advanced = session.advance()?;
    let stats = session.state.stats.last().cloned().expect("advance appends stats");
    events.push(advanced);
    Ok((events, stats))
}

/// Runs every batch unattended. Returns the finished session and its log.
pub fn run_session(ctx: Arc<SessionContext>, oracle: &dyn Oracle) -> Result<(Session, Vec<Event>)> {
    let (mut session, started) = Session::start(ctx)?;
    let mut log = vec![started];
    while !session.is_complete() {
        let (events, _) = run_iteration(&mut session, oracle)?;
        log.extend(events);
    }
    Ok((session, log))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopNSummary {
    pub cut: usize,
    /// Ranked by pattern weight.
    pub weighted: Option<MetricScores>,
    /// Mean over random orderings of the same questions.
    pub random: Option<MetricScores>,
    /// Batches where the cut exceeded the number of questions.
    pub truncated_batches: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionReport {
    pub stats: Vec<BatchStats>,
    /// Batches averaged by the top-N table: all but the first.
    pub window: Vec<usize>,
    pub topn: Vec<TopNSummary>,
    pub flags: Vec<String>,
}

/// A batch's ranked questions as hypotheses, keeping the first occurrence of
/// each (sentence, text) pair.
pub fn batch_hypotheses(questions: &[GeneratedQuestion]) -> Vec<Hypothesis> {
    let mut seen = HashSet::new();
    questions
        .iter()
        .filter(|q| seen.insert((q.sentence_id.clone(), q.question_text().to_lowercase())))
        .map(|q| Hypothesis {
            sentence_id: q.sentence_id.clone(),
            question: q.question_text(),
        })
        .collect()
}

/// Top-N scores of one batch under its recorded ranking and under the
/// averaged random baseline.
pub fn batch_topn(
    record: &BatchRecord,
    reference: &Reference,
    cut: usize,
    table: Option<&EmbeddingTable>,
) -> Result<(Option<MetricScores>, Option<MetricScores>, bool)> {
    let ranked = batch_hypotheses(&record.questions);
    let weighted = evaluate_topn(&ranked, reference, &[cut], table)?;
    let truncated = weighted.cuts[0].truncated;
    let mut random = Vec::new();
    for k in 0..RANDOM_BASELINE_ORDERINGS {
        let seed = k * 1_000_003 + record.index as u64;
        let shuffled = batch_hypotheses(&random_order(&record.questions, seed));
        if let Some(s) = evaluate_topn(&shuffled, reference, &[cut], table)?.cuts[0].scores {
            random.push(s);
        }
    }
    Ok((weighted.cuts[0].scores, MetricScores::mean(&random), truncated))
}

pub fn session_report(
    state: &SessionState,
    reference: Option<&Reference>,
    cuts: &[usize],
    table: Option<&EmbeddingTable>,
) -> Result<SessionReport> {
    let mut flags = Vec::new();
    let window: Vec<usize> = state.history.iter().skip(1).map(|r| r.index).collect();
    if state.history.iter().all(|r| r.questions.is_empty()) {
        flags.push("no questions were generated".to_string());
    }
    if window.is_empty() {
        flags.push("first batch excluded leaves no data".to_string());
    }
    let mut topn = Vec::new();
    if let Some(reference) = reference {
        for &cut in cuts {
            let mut weighted = Vec::new();
            let mut random = Vec::new();
            let mut truncated_batches = Vec::new();
            for record in state.history.iter().skip(1) {
                let (w, r, t) = batch_topn(record, reference, cut, table)?;
                weighted.extend(w);
                random.extend(r);
                if t {
                    truncated_batches.push(record.index);
                }
            }
            topn.push(TopNSummary {
                cut,
                weighted: MetricScores::mean(&weighted),
                random: MetricScores::mean(&random),
                truncated_batches,
            });
        }
    }
    Ok(SessionReport {
        stats: state.stats.clone(),
        window,
        topn,
        flags,
    })
}

impl SessionReport {
    /// Plain-text rendering: the batch table, then one top-N table per cut.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&BatchStats::COLUMNS.join("\t"));
        out.push('\n');
        for s in &self.stats {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{:.1}\t{:.3}\n",
                s.batch + 1,
                s.patterns,
                s.new,
                s.questions,
                s.unique,
                s.discarded,
                s.discarded_pct,
                s.edit_avg
            ));
        }
        for t in &self.topn {
            out.push_str(&format!("\ntop {} (batches {:?})\n", t.cut, self.window.iter().map(|b| b + 1).collect::<Vec<_>>()));
            out.push_str("ranking\tbleu1\tbleu4\tbleu1_pooled\tbleu4_pooled\trouge_l\toverlap\tlev\teacs\tvecs\tgms\n");
            for (name, m) in [("weighted", &t.weighted), ("random", &t.random)] {
                let Some(m) = m else {
                    out.push_str(&format!("{name}\t-\n"));
                    continue;
                };
                let e = m
                    .embedding
                    .map(|e| format!("{:.4}\t{:.4}\t{:.4}", e.eacs, e.vecs, e.gms))
                    .unwrap_or_else(|| "-\t-\t-".into());
                out.push_str(&format!(
                    "{name}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{e}\n",
                    m.bleu1, m.bleu4, m.bleu1_pooled, m.bleu4_pooled, m.rouge_l, m.overlap, m.lev
                ));
            }
            if !t.truncated_batches.is_empty() {
                out.push_str(&format!(
                    "cut exceeds the question count in batches {:?}\n",
                    t.truncated_batches.iter().map(|b| b + 1).collect::<Vec<_>>()
                ));
            }
        }
        for f in &self.flags {
            out.push_str(&format!("note: {f}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::{ConstituencyNode, Token};

    fn corpus(n: usize) -> Vec<AnnotatedSentence> {
        (0..n)
            .map(|i| AnnotatedSentence {
                id: format!("s{i}"),
                tokens: vec![Token::new(0, "x", "NN")],
                constituency: ConstituencyNode::leaf("NN", 0),
                dependencies: Vec::new(),
                srl_frames: Vec::new(),
            })
            .collect()
    }

    #[test]
    fn batch_sizes_keep_the_remainder() {
        let c = corpus(73);
        let sizes = |p: BatchPlan| p.batches.iter().map(Vec::len).collect::<Vec<_>>();
        let ten = sizes(plan_batches(&c, 10, None).unwrap());
        assert_eq!(ten, vec![10, 10, 10, 10, 10, 10, 10, 3]);
        assert_eq!(plan_batches(&c, 12, None).unwrap().len(), 7);
        assert_eq!(plan_batches(&c, 100, None).unwrap().len(), 1);
        assert!(plan_batches(&[], 5, None).is_err());
        assert!(plan_batches(&c, 0, None).is_err());
    }

    #[test]
    fn shuffle_is_a_seeded_permutation() {
        let c = corpus(20);
        let a = plan_batches(&c, 5, Some(7)).unwrap();
        assert_eq!(a, plan_batches(&c, 5, Some(7)).unwrap());
        let mut flat: Vec<String> = a.batches.concat();
        assert_ne!(flat, plan_batches(&c, 5, None).unwrap().batches.concat());
        flat.sort();
        let mut ids: Vec<String> = c.iter().map(|s| s.id.clone()).collect();
        ids.sort();
        assert_eq!(flat, ids);
    }

    fn q(id: &str, pattern: &str) -> GeneratedQuestion {
        GeneratedQuestion {
            id: id.into(),
            text: vec!["Who".into(), "?".into()],
            answer: vec!["x".into()],
            answer_indices: vec![0],
            pattern_id: pattern.into(),
            strategy: MatchStrategy::Strict,
            sentence_id: "s".into(),
            frame_index: 0,
            alignment_trace: Vec::new(),
            rank_score: 0.0,
        }
    }

    #[test]
    fn ranking_by_weight_then_generation_order() {
        let qs = vec![q("a", "p2"), q("b", "p1"), q("c", "p2")];
        let none: Vec<Pattern> = Vec::new();
        let ids = |v: Vec<GeneratedQuestion>| v.into_iter().map(|q| q.id).collect::<Vec<_>>();
        assert_eq!(ids(rank_questions(qs.clone(), &none)), vec!["a", "b", "c"]);
    }
}
