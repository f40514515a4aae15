//! Token equivalence functions and their composite.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::annotation::Token;
use crate::error::{Error, Result};
use crate::resources::{
    cosine, EmbeddingTable, NeInclusionRules, Resources, SenseInventory, SynsetGraph,
};

pub const LEXICAL_LEMMA_SCORE: f64 = 0.75;
pub const VERB_SENSE_SCORE: f64 = 0.75;
pub const NE_INCLUDES_SCORE: f64 = 0.9;
pub const WORDNET_HOP_DECREMENT: f64 = 0.1;
pub const DEFAULT_W2V_FLOOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivFunction {
    #[serde(alias = "l")]
    Lexical,
    #[serde(alias = "vb")]
    VerbSense,
    #[serde(alias = "ne")]
    NamedEntity,
    #[serde(alias = "wn")]
    WordNet,
    #[serde(alias = "w2v")]
    Embedding,
}

impl EquivFunction {
    pub const ALL: [EquivFunction; 5] = [
        EquivFunction::Lexical,
        EquivFunction::VerbSense,
        EquivFunction::NamedEntity,
        EquivFunction::WordNet,
        EquivFunction::Embedding,
    ];
}

/// Acquisition aligns the same entity; generation looks for an entity of the
/// same type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivMode {
    Acquisition,
    Generation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivConfig {
    pub mode: EquivMode,
    pub enabled: Vec<EquivFunction>,
    pub w2v_floor: f64,
}

impl EquivConfig {
    pub fn new(mode: EquivMode) -> Self {
        EquivConfig {
            mode,
            enabled: EquivFunction::ALL.to_vec(),
            w2v_floor: DEFAULT_W2V_FLOOR,
        }
    }

    pub fn acquisition() -> Self {
        EquivConfig::new(EquivMode::Acquisition)
    }

    pub fn generation() -> Self {
        EquivConfig::new(EquivMode::Generation)
    }

    pub fn with_functions(mut self, functions: &[EquivFunction]) -> Self {
        self.enabled = functions.to_vec();
        self
    }

    pub fn with_mode(&self, mode: EquivMode) -> Self {
        EquivConfig {
            mode,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.enabled.is_empty() {
            return Err(Error::Config("no equivalence function enabled".into()));
        }
        if !(0.0..=1.0).contains(&self.w2v_floor) {
            return Err(Error::Config(format!("w2v_floor {} outside [0, 1]", self.w2v_floor)));
        }
        Ok(())
    }

    pub fn is_enabled(&self, f: EquivFunction) -> bool {
        self.enabled.contains(&f)
    }
}

/// Surface match scores 1, lemma match 0.75.
pub fn equiv_lexical(a: &Token, b: &Token) -> f64 {
    if a.surface_eq(b) {
        1.0
    } else if !a.lemma.is_empty() && a.lemma.to_lowercase() == b.lemma.to_lowercase() {
        LEXICAL_LEMMA_SCORE
    } else {
        0.0
    }
}

/// Two verbs sharing a sense class score 0.75.
pub fn equiv_verbsense(inv: &SenseInventory, a: &Token, b: &Token) -> f64 {
    if !a.is_verb() || !b.is_verb() {
        return 0.0;
    }
    let sa = inv.senses_of(a);
    if inv.senses_of(b).iter().any(|s| sa.contains(s)) {
        VERB_SENSE_SCORE
    } else {
        0.0
    }
}

pub fn equiv_ne(rules: &NeInclusionRules, a: &Token, b: &Token, mode: EquivMode) -> f64 {
    let (Some(ta), Some(tb)) = (&a.ne_type, &b.ne_type) else {
        return 0.0;
    };
    if ta != tb {
        return 0.0;
    }
    match mode {
        EquivMode::Generation => 1.0,
        EquivMode::Acquisition if a.surface_eq(b) => 1.0,
        EquivMode::Acquisition if rules.includes(&a.surface, &b.surface, ta) => NE_INCLUDES_SCORE,
        EquivMode::Acquisition => 0.0,
    }
}

/// 1 for shared synsets, otherwise 1 − 0.1·max(n, m) over the hops to the
/// least common subsumer. Unknown synset ids score 0.
pub fn equiv_wordnet(graph: &SynsetGraph, a: &Token, b: &Token) -> f64 {
    if a.synset_ids.is_empty() || b.synset_ids.is_empty() {
        return 0.0;
    }
    match graph.least_common_subsumer_distance(&a.synset_ids, &b.synset_ids) {
        Ok(Some(d)) => {
            let hops = d.from_a.max(d.from_b);
            // Integer arithmetic keeps 1 − 0.1·hops exact at one decimal.
            let score = (10.0 - hops as f64) / 10.0;
            debug_assert!((score - (1.0 - WORDNET_HOP_DECREMENT * hops as f64)).abs() < 1e-12);
            score.max(0.0)
        }
        Ok(None) => 0.0,
        Err(e) => {
            warn!("wordnet equivalence of `{}`/`{}`: {e}", a.surface, b.surface);
            0.0
        }
    }
}

/// Raw cosine of the tokens' vectors (0 when either has none).
pub fn equiv_w2v(table: &EmbeddingTable, a: &Token, b: &Token) -> f64 {
    match (table.token_vector(a), table.token_vector(b)) {
        (Some(va), Some(vb)) => cosine(&va, &vb).unwrap_or(0.0),
        _ => 0.0,
    }
}

/// Composite equivalence over a resource bundle.
#[derive(Debug, Clone, Copy)]
pub struct Equivalence<'a> {
    pub resources: &'a Resources,
    pub config: &'a EquivConfig,
}

impl<'a> Equivalence<'a> {
    pub fn new(resources: &'a Resources, config: &'a EquivConfig) -> Self {
        Equivalence { resources, config }
    }

    pub fn function(&self, f: EquivFunction, a: &Token, b: &Token) -> f64 {
        let r = self.resources;
        match f {
            EquivFunction::Lexical => equiv_lexical(a, b),
            EquivFunction::VerbSense => equiv_verbsense(&r.senses, a, b),
            EquivFunction::NamedEntity => equiv_ne(&r.ne_rules, a, b, self.config.mode),
            EquivFunction::WordNet => equiv_wordnet(&r.synsets, a, b),
            EquivFunction::Embedding => {
                let c = equiv_w2v(&r.embeddings, a, b);
                if c < self.config.w2v_floor {
                    0.0
                } else {
                    c.clamp(0.0, 1.0)
                }
            }
        }
    }

    /// Maximum over the enabled functions; equal surfaces always score 1.
    pub fn score(&self, a: &Token, b: &Token) -> f64 {
        if a.surface_eq(b) {
            return 1.0;
        }
        self.config
            .enabled
            .iter()
            .map(|&f| self.function(f, a, b))
            .fold(0.0, f64::max)
    }
}
