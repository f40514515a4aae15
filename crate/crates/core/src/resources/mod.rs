//! Lexical resources behind the token equivalence functions.
//!
//! Every resource is a plain text file so that real inventories can replace
//! the toy fixtures without code changes. [`Resources::load_dir`] picks up
//! the conventional file names and falls back to built-in defaults for
//! anything missing.

mod embeddings;
mod lexicon;
mod ne_rules;
mod senses;
mod synsets;

use std::fs;
use std::path::Path;

pub use embeddings::{cosine, EmbeddingTable};
pub use lexicon::{Stopwords, VerbLexicon};
pub use ne_rules::{NeInclusionRules, NeRule};
pub use senses::SenseInventory;
pub use synsets::{SubsumerDistance, SynsetGraph, DEFAULT_HOP_CAP};

use crate::error::{Error, Result};

pub const SENSES_FILE: &str = "senses.tsv";
pub const SYNSETS_FILE: &str = "synsets.tsv";
pub const EMBEDDINGS_FILE: &str = "embeddings.txt";
pub const STOPWORDS_FILE: &str = "stopwords.txt";
pub const VERBS_FILE: &str = "verbs.tsv";
pub const NE_RULES_FILE: &str = "ne_rules.tsv";

#[derive(Debug, Clone, Default)]
pub struct Resources {
    pub senses: SenseInventory,
    pub synsets: SynsetGraph,
    pub embeddings: EmbeddingTable,
    pub ne_rules: NeInclusionRules,
    pub stopwords: Stopwords,
    pub verbs: VerbLexicon,
}

fn read_optional(dir: &Path, name: &str) -> Result<Option<String>> {
    let path = dir.join(name);
    match fs::read_to_string(&path) {
        Ok(text) => Ok(Some(text)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::io(path, e)),
    }
}

impl Resources {
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        if !dir.is_dir() {
            return Err(Error::NotFound(format!("resource directory {}", dir.display())));
        }
        let mut res = Resources::default();
        if let Some(t) = read_optional(dir, SENSES_FILE)? {
            res.senses = SenseInventory::parse(&t)?;
        }
        if let Some(t) = read_optional(dir, SYNSETS_FILE)? {
            res.synsets = SynsetGraph::parse(&t)?;
        }
        if let Some(t) = read_optional(dir, EMBEDDINGS_FILE)? {
            res.embeddings = EmbeddingTable::parse(&t)?;
        }
        if let Some(t) = read_optional(dir, STOPWORDS_FILE)? {
            res.stopwords = Stopwords::parse(&t);
        }
        if let Some(t) = read_optional(dir, VERBS_FILE)? {
            res.verbs.extend(VerbLexicon::parse(&t)?);
        }
        if let Some(t) = read_optional(dir, NE_RULES_FILE)? {
            res.ne_rules = NeInclusionRules::parse(&t)?;
        }
        Ok(res)
    }
}
