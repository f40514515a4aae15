//! Question generation: matching pattern predicate-argument structures
//! against new sentences and rewriting the pattern question.

mod realize;
mod template;
mod tree_match;

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

pub use realize::{predicate_tense, realize_verb, Tense, VerbRealization};
pub use template::{compile_template, TemplateMatch, TreeTemplate};
pub use tree_match::{
    assign_disjoint, forest_nodes, match_forest_strict, match_forest_subtree, match_subtree,
    match_trees_strict, TokenMap,
};

use crate::acquisition::{extract_predicate_arguments, ArgumentStructure, Pattern, PredicateArgument, Side};
use crate::annotation::{AnnotatedSentence, Token};
use crate::resources::Resources;
use crate::similarity::{EquivConfig, EquivMode, Equivalence};
use crate::text::{capitalize_first, render};

/// Tree-comparison regimes, least flexible first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchStrategy {
    Strict,
    Subtree,
    SubtreeFlex,
    Argument,
}

impl MatchStrategy {
    pub const ALL: [MatchStrategy; 4] = [
        MatchStrategy::Strict,
        MatchStrategy::Subtree,
        MatchStrategy::SubtreeFlex,
        MatchStrategy::Argument,
    ];

    pub fn replaces_chunks(self) -> bool {
        matches!(self, MatchStrategy::SubtreeFlex | MatchStrategy::Argument)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArgumentMatch {
    pub label: String,
    pub candidate_span: [usize; 2],
    /// Pattern sentence token → candidate sentence token.
    pub token_map: TokenMap,
    /// Candidate tokens replacing the argument, ascending.
    pub chunk: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchBundle {
    pub strategy: MatchStrategy,
    pub candidate_frame: usize,
    pub predicate_index: usize,
    pub arguments: Vec<ArgumentMatch>,
    /// Dependency relations of every pattern argument also occur in the
    /// candidate argument. Recorded, never required.
    pub dependencies_corroborate: bool,
}

impl MatchBundle {
    pub fn argument(&self, label: &str) -> Option<&ArgumentMatch> {
        self.arguments.iter().find(|a| a.label == label)
    }
}

fn ne_types<'a>(tokens: &'a [Token], arg: &ArgumentStructure) -> BTreeSet<&'a str> {
    arg.indices().filter_map(|i| tokens[i].ne_type.as_deref()).collect()
}

fn match_argument_trees(
    strategy: MatchStrategy,
    parg: &ArgumentStructure,
    ptokens: &[Token],
    carg: &ArgumentStructure,
    ctokens: &[Token],
    eq: &Equivalence,
) -> Option<(TokenMap, Vec<usize>)> {
    let whole: Vec<usize> = carg.indices().collect();
    match strategy {
        MatchStrategy::Strict => {
            let map = match_forest_strict(&parg.forest, ptokens, &carg.forest, ctokens, eq)?;
            Some((map, whole))
        }
        MatchStrategy::Subtree => match_forest_subtree(&parg.forest, ptokens, &carg.forest, ctokens, eq),
        MatchStrategy::SubtreeFlex => {
            let templates: Vec<TreeTemplate> = parg.forest.iter().map(compile_template).collect();
            let nodes = forest_nodes(&carg.forest);
            let chosen = assign_disjoint(&templates, &nodes, |t, n| t.match_at(n))?;
            let mut map = Vec::new();
            let mut chunk = Vec::new();
            for (_, m) in chosen {
                map.extend(m.leaf_pairs);
                chunk.extend(m.chunk);
            }
            chunk.sort_unstable();
            chunk.dedup();
            Some((map, chunk))
        }
        MatchStrategy::Argument => Some((Vec::new(), whole)),
    }
}

fn dependency_labels(arg: &ArgumentStructure) -> BTreeSet<&str> {
    arg.dependencies.iter().map(|e| e.relation.as_str()).collect()
}

/// Checks a pattern against one candidate structure: equivalent predicates,
/// argument labels contained in the candidate's, per-argument tree match
/// under `strategy`, and compatible entity types in answer arguments.
pub fn pa_matches(
    p: &Pattern,
    candidate: &PredicateArgument,
    sentence: &AnnotatedSentence,
    strategy: MatchStrategy,
    eq: &Equivalence,
) -> Option<MatchBundle> {
    if eq.score(&p.pa.predicate, &candidate.predicate) <= 0.0 {
        return None;
    }
    let ptokens = &p.sentence.tokens;
    let ctokens = &sentence.tokens;
    let mut arguments = Vec::new();
    let mut corroborate = true;
    for parg in &p.pa.arguments {
        let carg = candidate.argument(&parg.label)?;
        if p.sides.get(&parg.label) == Some(&Side::Answer) {
            let (pt, ct) = (ne_types(ptokens, parg), ne_types(ctokens, carg));
            if !pt.is_empty() && !ct.is_empty() && pt.is_disjoint(&ct) {
                return None;
            }
        }
        let (token_map, chunk) = match_argument_trees(strategy, parg, ptokens, carg, ctokens, eq)?;
        corroborate &= dependency_labels(parg).is_subset(&dependency_labels(carg));
        arguments.push(ArgumentMatch {
            label: parg.label.clone(),
            candidate_span: carg.span,
            token_map,
            chunk,
        });
    }
    Some(MatchBundle {
        strategy,
        candidate_frame: candidate.frame_index,
        predicate_index: candidate.predicate_index,
        arguments,
        dependencies_corroborate: corroborate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedQuestion {
    /// Assigned when the question enters a review batch.
    #[serde(default)]
    pub id: String,
    pub text: Vec<String>,
    pub answer: Vec<String>,
    /// Source sentence indices of the answer tokens.
    #[serde(default)]
    pub answer_indices: Vec<usize>,
    pub pattern_id: String,
    pub strategy: MatchStrategy,
    pub sentence_id: String,
    pub frame_index: usize,
    /// Output token position → candidate sentence token index.
    pub alignment_trace: Vec<(usize, usize)>,
    pub rank_score: f64,
}

impl GeneratedQuestion {
    pub fn question_text(&self) -> String {
        render(self.text.iter().map(String::as_str))
    }

    pub fn answer_text(&self) -> String {
        render(self.answer.iter().map(String::as_str))
    }
}

fn is_proper(t: &Token) -> bool {
    t.ne_type.is_some() || t.pos.starts_with("NNP")
}

/// Surface of a candidate token inside a question: the sentence-initial
/// capital is dropped unless the token is a proper noun.
fn question_surface(t: &Token) -> String {
    if t.index == 0 && !is_proper(t) {
        t.surface.to_lowercase()
    } else {
        t.surface.clone()
    }
}

enum Slot {
    Keep,
    Token(usize),
    Chunk(Vec<usize>),
    Skip,
    Verb,
    Aux(String),
}

/// Rewrites the pattern question for one match. `None` when the
/// replacements conflict or leave nothing to ask about.
pub fn realize(
    p: &Pattern,
    sentence: &AnnotatedSentence,
    m: &MatchBundle,
    res: &Resources,
) -> Option<GeneratedQuestion> {
    let q = &p.question;
    let links = p.question_links();
    let mut slots: Vec<Slot> = q.iter().map(|_| Slot::Keep).collect();
    let mut claimed = vec![false; q.len()];

    for am in &m.arguments {
        if p.sides.get(&am.label) != Some(&Side::Question) {
            continue;
        }
        let parg = p.pa.argument(&am.label)?;
        let arg_links: Vec<(usize, usize)> = links.iter().copied().filter(|(_, s)| parg.contains(*s)).collect();
        if arg_links.is_empty() {
            continue;
        }
        if m.strategy.replaces_chunks() {
            let chunk: Vec<usize> = am
                .chunk
                .iter()
                .copied()
                .filter(|&i| !sentence.tokens[i].is_punctuation())
                .collect();
            if chunk.is_empty() {
                return None;
            }
            let lo = arg_links.iter().map(|l| l.0).min()?;
            let hi = arg_links.iter().map(|l| l.0).max()?;
            for k in lo..=hi {
                if claimed[k] {
                    return None;
                }
                claimed[k] = true;
                slots[k] = Slot::Skip;
            }
            slots[lo] = Slot::Chunk(am.chunk.clone());
        } else {
            for (qi, si) in arg_links {
                let target = am.token_map.iter().find(|(a, _)| *a == si).map(|(_, b)| *b)?;
                if claimed[qi] {
                    return None;
                }
                claimed[qi] = true;
                if !p.sentence.tokens[si].surface_eq(&sentence.tokens[target]) {
                    slots[qi] = Slot::Token(target);
                }
            }
        }
    }

    let verb_links: Vec<usize> = links
        .iter()
        .filter(|(_, s)| *s == p.pa.predicate_index)
        .map(|(qi, _)| *qi)
        .collect();
    if let Some(&vi) = verb_links.first() {
        if claimed[vi] {
            return None;
        }
        let linked: Vec<usize> = links.iter().map(|l| l.0).collect();
        let cand = &sentence.tokens[m.predicate_index];
        let same_lemma = cand.lemma.eq_ignore_ascii_case(&p.pa.predicate.lemma);
        let r = realize_verb(
            q,
            vi,
            &linked,
            cand,
            predicate_tense(&sentence.tokens, m.predicate_index),
            predicate_tense(&p.sentence.tokens, p.pa.predicate_index),
            same_lemma,
            &res.verbs,
        );
        if r.verb != q[vi].surface {
            slots[vi] = Slot::Verb;
        }
        if let Some((ai, aux)) = r.auxiliary {
            if claimed[ai] {
                return None;
            }
            if !aux.eq_ignore_ascii_case(&q[ai].surface) {
                slots[ai] = Slot::Aux(aux);
            }
        }
        return Some(assemble(p, sentence, m, slots, Some(r.verb)));
    }
    Some(assemble(p, sentence, m, slots, None))
}

fn assemble(
    p: &Pattern,
    sentence: &AnnotatedSentence,
    m: &MatchBundle,
    slots: Vec<Slot>,
    verb: Option<String>,
) -> GeneratedQuestion {
    let mut text = Vec::new();
    let mut trace = Vec::new();
    for (qi, slot) in slots.into_iter().enumerate() {
        match slot {
            Slot::Keep => text.push(p.question[qi].surface.clone()),
            Slot::Skip => {}
            Slot::Token(si) => {
                trace.push((text.len(), si));
                text.push(question_surface(&sentence.tokens[si]));
            }
            Slot::Chunk(chunk) => {
                for si in chunk {
                    trace.push((text.len(), si));
                    text.push(question_surface(&sentence.tokens[si]));
                }
            }
            Slot::Verb => {
                trace.push((text.len(), m.predicate_index));
                text.push(verb.clone().unwrap_or_default());
            }
            Slot::Aux(aux) => text.push(aux),
        }
    }
    if let Some(first) = text.first_mut() {
        *first = capitalize_first(first);
    }
    let mut answer_idx: Vec<usize> = m
        .arguments
        .iter()
        .filter(|a| p.sides.get(&a.label) == Some(&Side::Answer))
        .flat_map(|a| a.chunk.iter().copied())
        .collect();
    answer_idx.sort_unstable();
    answer_idx.dedup();
    GeneratedQuestion {
        id: String::new(),
        text,
        answer: answer_idx.iter().map(|&i| sentence.tokens[i].surface.clone()).collect(),
        answer_indices: answer_idx,
        pattern_id: p.id.clone(),
        strategy: m.strategy,
        sentence_id: sentence.id.clone(),
        frame_index: m.candidate_frame,
        alignment_trace: trace,
        rank_score: p.weight.w,
    }
}

/// All questions `p` generates for `s` under the enabled strategies, in
/// (frame, strategy) order, with duplicate texts removed (the least flexible
/// strategy producing a text is the one recorded).
pub fn generate(
    p: &Pattern,
    s: &AnnotatedSentence,
    strategies: &[MatchStrategy],
    cfg: &EquivConfig,
    res: &Resources,
) -> Vec<GeneratedQuestion> {
    let cfg = cfg.with_mode(EquivMode::Generation);
    let eq = Equivalence::new(res, &cfg);
    let mut ordered: Vec<MatchStrategy> = strategies.to_vec();
    ordered.sort_unstable();
    ordered.dedup();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for candidate in extract_predicate_arguments(s) {
        for &strategy in &ordered {
            let Some(m) = pa_matches(p, &candidate, s, strategy, &eq) else {
                continue;
            };
            let Some(q) = realize(p, s, &m, res) else {
                continue;
            };
            if q.answer.is_empty() {
                continue;
            }
            if seen.insert(q.question_text().to_lowercase()) {
                out.push(q);
            }
        }
    }
    out
}

/// Questions from every pattern of a pool, pattern by pattern.
pub fn generate_all(
    pool: &[Pattern],
    s: &AnnotatedSentence,
    strategies: &[MatchStrategy],
    cfg: &EquivConfig,
    res: &Resources,
) -> Vec<GeneratedQuestion> {
    pool.iter()
        .flat_map(|p| generate(p, s, strategies, cfg, res))
        .collect()
}
