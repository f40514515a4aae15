//! Pattern acquisition: seeds become ⟨Q/A, predicate-argument, alignment⟩
//! tuples.

use std::collections::{BTreeMap, HashSet};

use log::warn;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alignment::{alignment_complete, best_alignment, build_score_matrix, Alignment};
use crate::annotation::{AnnotatedSentence, ConstituencyNode, DependencyEdge, Seed, SrlFrame, Token};
use crate::resources::Resources;
use crate::similarity::{EquivConfig, EquivMode, Equivalence};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgumentStructure {
    pub label: String,
    /// Inclusive token range.
    pub span: [usize; 2],
    /// Maximal constituents whose leaves lie inside the span, left to right.
    pub forest: Vec<ConstituencyNode>,
    /// Internal constituents nested under the forest, in pre-order.
    pub nested: Vec<ConstituencyNode>,
    /// Edges whose dependent is in the span and whose head is in the span or
    /// is the predicate.
    pub dependencies: Vec<DependencyEdge>,
}

impl ArgumentStructure {
    pub fn contains(&self, index: usize) -> bool {
        self.span[0] <= index && index <= self.span[1]
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.span[0]..=self.span[1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateArgument {
    pub frame_index: usize,
    pub predicate_index: usize,
    pub predicate: Token,
    pub arguments: Vec<ArgumentStructure>,
}

impl PredicateArgument {
    pub fn argument(&self, label: &str) -> Option<&ArgumentStructure> {
        self.arguments.iter().find(|a| a.label == label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.arguments.iter().map(|a| a.label.as_str())
    }
}

fn covering_forest(node: &ConstituencyNode, start: usize, end: usize, out: &mut Vec<ConstituencyNode>) {
    let Some((lo, hi)) = node.span() else {
        return;
    };
    if hi < start || lo > end {
        return;
    }
    if start <= lo && hi <= end {
        out.push(node.clone());
        return;
    }
    for c in &node.children {
        covering_forest(c, start, end, out);
    }
}

fn build_argument(s: &AnnotatedSentence, frame: &SrlFrame, label: &str, span: [usize; 2]) -> ArgumentStructure {
    let mut forest = Vec::new();
    covering_forest(&s.constituency, span[0], span[1], &mut forest);
    let nested = forest
        .iter()
        .flat_map(|t| t.preorder().into_iter().skip(1))
        .filter(|n| !n.is_leaf())
        .cloned()
        .collect();
    let inside = |i: usize| span[0] <= i && i <= span[1];
    let dependencies = s
        .dependencies
        .iter()
        .filter(|e| inside(e.dependent) && (inside(e.head) || e.head == frame.predicate_index))
        .cloned()
        .collect();
    ArgumentStructure {
        label: label.to_string(),
        span,
        forest,
        nested,
        dependencies,
    }
}

/// One predicate-argument structure per SRL frame, in frame order. Frames
/// without arguments are skipped.
pub fn extract_predicate_arguments(s: &AnnotatedSentence) -> Vec<PredicateArgument> {
    s.srl_frames
        .iter()
        .enumerate()
        .filter_map(|(fi, frame)| {
            if frame.arguments.is_empty() {
                warn!("sentence {}: frame {fi} has no arguments, skipped", s.id);
                return None;
            }
            Some(PredicateArgument {
                frame_index: fi,
                predicate_index: frame.predicate_index,
                predicate: s.tokens[frame.predicate_index].clone(),
                arguments: frame
                    .arguments
                    .iter()
                    .map(|a| build_argument(s, frame, &a.label, a.span))
                    .collect(),
            })
        })
        .collect()
}

/// Which part of Q/A an argument is aligned with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Question,
    Answer,
}

/// Reviewer-driven score of a pattern and its update history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternWeight {
    pub w: f64,
    pub history: Vec<WeightUpdate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightUpdate {
    pub question_id: String,
    pub sim: f64,
    pub w: f64,
}

impl Default for PatternWeight {
    fn default() -> Self {
        PatternWeight {
            w: 1.0,
            history: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    pub id: String,
    pub seed_id: String,
    pub iteration: usize,
    pub sentence: AnnotatedSentence,
    pub question: Vec<Token>,
    pub answer: Vec<Token>,
    pub pa: PredicateArgument,
    /// Q/A indices: `0..question.len()` is the question, the rest the answer.
    pub alignment: Alignment,
    /// Stopword links (question index, sentence index) that ride along with
    /// aligned neighbours inside an argument.
    pub anchors: Vec<(usize, usize)>,
    pub sides: BTreeMap<String, Side>,
    pub weight: PatternWeight,
}

impl Pattern {
    pub fn wh_word(&self) -> &str {
        &self.question[0].surface
    }

    pub fn question_text(&self) -> String {
        crate::text::render(self.question.iter().map(|t| t.surface.as_str()))
    }

    /// Question-token links (alignment restricted to the question, plus
    /// anchors), sorted by question index.
    pub fn question_links(&self) -> Vec<(usize, usize)> {
        let qn = self.question.len();
        let mut links: Vec<(usize, usize)> = self
            .alignment
            .pairs
            .iter()
            .filter(|p| p.qa < qn)
            .map(|p| (p.qa, p.s))
            .chain(self.anchors.iter().copied())
            .collect();
        links.sort_unstable();
        links
    }

    pub fn answer_labels(&self) -> Vec<&str> {
        self.sides
            .iter()
            .filter(|(_, s)| **s == Side::Answer)
            .map(|(l, _)| l.as_str())
            .collect()
    }

    /// Checks both pattern invariants: every predicate-argument content
    /// token is aligned, and each argument aligns to one side only.
    pub fn check_invariants(&self, res: &Resources) -> bool {
        validate_frame(
            &self.sentence,
            &self.pa,
            &self.alignment,
            self.question.len(),
            res,
        )
        .is_some_and(|sides| sides == self.sides)
    }
}

/// Returns the side of every argument with aligned content, or `None` when
/// the structure is not fully aligned or an argument mixes both sides.
fn validate_frame(
    s: &AnnotatedSentence,
    pa: &PredicateArgument,
    alignment: &Alignment,
    question_len: usize,
    res: &Resources,
) -> Option<BTreeMap<String, Side>> {
    alignment.qa_index_of(pa.predicate_index)?;
    let mut sides = BTreeMap::new();
    for arg in &pa.arguments {
        let mut side = None;
        for i in arg.indices() {
            let token = &s.tokens[i];
            match alignment.qa_index_of(i) {
                Some(qa) => {
                    let this = if qa < question_len { Side::Question } else { Side::Answer };
                    if side.is_some_and(|s| s != this) {
                        return None;
                    }
                    side = Some(this);
                }
                None if res.stopwords.is_stopword(token) => {}
                None => return None,
            }
        }
        if let Some(side) = side {
            sides.insert(arg.label.clone(), side);
        }
    }
    Some(sides)
}

/// Links question stopwords to identical sentence stopwords when both sit
/// next to an aligned pair inside the same argument, repeating until no new
/// link appears.
fn anchor_stopwords(
    question: &[Token],
    s: &AnnotatedSentence,
    pa: &PredicateArgument,
    alignment: &Alignment,
    res: &Resources,
) -> Vec<(usize, usize)> {
    let qn = question.len();
    let mut links: Vec<(usize, usize)> = alignment
        .pairs
        .iter()
        .filter(|p| p.qa < qn)
        .map(|p| (p.qa, p.s))
        .collect();
    let mut used_q: HashSet<usize> = links.iter().map(|l| l.0).collect();
    let mut used_s: HashSet<usize> = alignment.pairs.iter().map(|p| p.s).collect();
    let mut anchors = Vec::new();
    loop {
        let mut added = false;
        for k in 0..links.len() {
            let (q, si) = links[k];
            let Some(arg) = pa.arguments.iter().find(|a| a.contains(si)) else {
                continue;
            };
            for (dq, ds) in [(-1isize, -1isize), (1, 1)] {
                let (nq, ns) = (q as isize + dq, si as isize + ds);
                if nq < 0 || ns < 0 || nq as usize >= qn || ns as usize >= s.tokens.len() {
                    continue;
                }
                let (nq, ns) = (nq as usize, ns as usize);
                if nq == 0 || used_q.contains(&nq) || used_s.contains(&ns) || !arg.contains(ns) {
                    continue;
                }
                let (qt, st) = (&question[nq], &s.tokens[ns]);
                if res.stopwords.is_stopword(qt)
                    && res.stopwords.is_stopword(st)
                    && !qt.is_punctuation()
                    && qt.surface_eq(st)
                {
                    used_q.insert(nq);
                    used_s.insert(ns);
                    links.push((nq, ns));
                    anchors.push((nq, ns));
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    anchors.sort_unstable();
    anchors
}

fn pattern_hash(
    s: &AnnotatedSentence,
    question: &[Token],
    answer: &[Token],
    pa: &PredicateArgument,
    alignment: &Alignment,
) -> String {
    let mut h = Sha256::new();
    for t in &s.tokens {
        h.update(t.surface.as_bytes());
        h.update([0x1f]);
    }
    h.update([0x1e]);
    for t in question.iter().chain(answer) {
        h.update(t.surface.as_bytes());
        h.update([0x1f]);
    }
    h.update([0x1e]);
    h.update(pa.predicate_index.to_le_bytes());
    for a in &pa.arguments {
        h.update(a.label.as_bytes());
        h.update(a.span[0].to_le_bytes());
        h.update(a.span[1].to_le_bytes());
    }
    h.update([0x1e]);
    for p in &alignment.pairs {
        h.update(p.qa.to_le_bytes());
        h.update(p.s.to_le_bytes());
        h.update(p.score.to_le_bytes());
    }
    let digest = h.finalize();
    digest[..6].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionReport {
    pub seeds: usize,
    /// Seeds whose Q/A could not be fully aligned.
    pub incomplete_alignments: Vec<String>,
    /// (seed id, frame index) pairs failing a pattern invariant.
    pub rejected_frames: Vec<(String, usize)>,
    /// Patterns merged into an earlier identical one.
    pub duplicates: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Acquisition {
    pub patterns: Vec<Pattern>,
    pub report: AcquisitionReport,
}

/// Learns patterns from one seed.
pub fn patterns_from_seed(
    seed: &Seed,
    cfg: &EquivConfig,
    res: &Resources,
    wh_words: &[String],
    iteration: usize,
    report: &mut AcquisitionReport,
) -> Vec<Pattern> {
    let cfg = cfg.with_mode(EquivMode::Acquisition);
    let eq = Equivalence::new(res, &cfg);
    let answer = seed.answer_tokens();
    let qa: Vec<Token> = seed
        .question
        .iter()
        .chain(&answer)
        .enumerate()
        .map(|(i, t)| Token { index: i, ..t.clone() })
        .collect();
    let s = &seed.sentence;
    let matrix = build_score_matrix(&qa, s, &eq, &res.stopwords, wh_words);
    let alignment = best_alignment(&matrix);
    if !alignment_complete(&alignment, &matrix.rows) {
        report.incomplete_alignments.push(seed.id.clone());
        return Vec::new();
    }
    let mut out = Vec::new();
    for pa in extract_predicate_arguments(s) {
        let Some(sides) = validate_frame(s, &pa, &alignment, seed.question.len(), res) else {
            report.rejected_frames.push((seed.id.clone(), pa.frame_index));
            continue;
        };
        let anchors = anchor_stopwords(&seed.question, s, &pa, &alignment, res);
        let hash = pattern_hash(s, &seed.question, &answer, &pa, &alignment);
        out.push(Pattern {
            id: format!("it{iteration}-{hash}"),
            seed_id: seed.id.clone(),
            iteration,
            sentence: s.clone(),
            question: seed.question.clone(),
            answer: answer.clone(),
            pa,
            alignment: alignment.clone(),
            anchors,
            sides,
            weight: PatternWeight::default(),
        });
    }
    out
}

/// Content part of a pattern id, shared across iterations.
pub fn content_hash(id: &str) -> &str {
    id.split_once('-').map_or(id, |(_, h)| h)
}

/// Learns patterns from every seed, in seed then frame order, merging
/// duplicates into the earliest occurrence.
pub fn acquire_patterns(
    seeds: &[Seed],
    cfg: &EquivConfig,
    res: &Resources,
    wh_words: &[String],
    iteration: usize,
) -> Acquisition {
    let mut report = AcquisitionReport {
        seeds: seeds.len(),
        ..Default::default()
    };
    let mut seen = HashSet::new();
    let mut patterns = Vec::new();
    for seed in seeds {
        for p in patterns_from_seed(seed, cfg, res, wh_words, iteration, &mut report) {
            if seen.insert(content_hash(&p.id).to_string()) {
                patterns.push(p);
            } else {
                report.duplicates += 1;
            }
        }
    }
    Acquisition { patterns, report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::{SrlArgument, SrlFrame};

    fn sentence() -> AnnotatedSentence {
        let (tree, words) = ConstituencyNode::from_bracketed(
            "(S (NP (NNP Bob)) (VP (VBD baked) (NP (DT the) (JJ chocolate) (NNS cookies))))",
            0,
        )
        .unwrap();
        let pos = ["NNP", "VBD", "DT", "JJ", "NNS"];
        AnnotatedSentence {
            id: "s".into(),
            tokens: words
                .iter()
                .zip(pos)
                .enumerate()
                .map(|(i, (w, p))| Token::new(i, w, p))
                .collect(),
            constituency: tree,
            dependencies: vec![
                DependencyEdge {
                    head: 1,
                    dependent: 0,
                    relation: "nsubj".into(),
                },
                DependencyEdge {
                    head: 1,
                    dependent: 4,
                    relation: "dobj".into(),
                },
                DependencyEdge {
                    head: 4,
                    dependent: 2,
                    relation: "det".into(),
                },
            ],
            srl_frames: vec![SrlFrame {
                predicate_index: 1,
                arguments: vec![SrlArgument::new("A0", 0, 0), SrlArgument::new("A1", 3, 4)],
            }],
        }
    }

    #[test]
    fn forest_is_maximal_and_nested_is_below_it() {
        let s = sentence();
        let pa = &extract_predicate_arguments(&s)[0];
        let a0 = pa.argument("A0").unwrap();
        assert_eq!(a0.forest.len(), 1);
        assert_eq!(a0.forest[0].label, "NP");
        // "chocolate cookies" is not a constituent: two leaves form the forest.
        let a1 = pa.argument("A1").unwrap();
        assert_eq!(a1.forest.iter().map(|n| n.label.as_str()).collect::<Vec<_>>(), vec!["JJ", "NNS"]);
        assert!(a1.nested.is_empty());
        assert_eq!(a1.dependencies.len(), 1);
        assert_eq!(a1.dependencies[0].dependent, 4);
    }

    #[test]
    fn frames_without_arguments_are_skipped() {
        let mut s = sentence();
        s.srl_frames[0].arguments.clear();
        assert!(extract_predicate_arguments(&s).is_empty());
    }

    #[test]
    fn content_hash_strips_iteration() {
        assert_eq!(content_hash("it3-abcdef012345"), "abcdef012345");
    }
}
