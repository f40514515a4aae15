use std::collections::{BTreeMap, BTreeSet};

use crate::annotation::Token;
use crate::error::{Error, Result};

/// Verb-sense classes (frame or class names) mapped to member lemmas.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SenseInventory {
    classes: BTreeMap<String, BTreeSet<String>>,
    by_lemma: BTreeMap<String, BTreeSet<String>>,
}

impl SenseInventory {
    /// Parses `class_id<TAB>lemma1 lemma2 ...` lines. Blank lines and `#`
    /// comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut inv = SenseInventory::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (class, lemmas) = line.split_once('\t').ok_or_else(|| Error::Resource {
                resource: "sense inventory".into(),
                line: lineno + 1,
                message: "expected `class<TAB>lemmas`".into(),
            })?;
            let class = class.trim();
            if class.is_empty() {
                return Err(Error::Resource {
                    resource: "sense inventory".into(),
                    line: lineno + 1,
                    message: "empty class id".into(),
                });
            }
            inv.insert(class, lemmas.split_whitespace());
        }
        Ok(inv)
    }

    pub fn insert<'a>(&mut self, class: &str, lemmas: impl IntoIterator<Item = &'a str>) {
        for lemma in lemmas {
            let lemma = lemma.to_lowercase();
            self.classes
                .entry(class.to_string())
                .or_default()
                .insert(lemma.clone());
            self.by_lemma
                .entry(lemma)
                .or_default()
                .insert(class.to_string());
        }
    }

    pub fn classes_of(&self, lemma: &str) -> impl Iterator<Item = &str> {
        self.by_lemma
            .get(&lemma.to_lowercase())
            .into_iter()
            .flat_map(|s| s.iter().map(String::as_str))
    }

    pub fn members(&self, class: &str) -> Option<&BTreeSet<String>> {
        self.classes.get(class)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Sense classes of a token: those annotated on it plus the classes that
    /// list its lemma.
    pub fn senses_of<'a>(&'a self, token: &'a Token) -> BTreeSet<&'a str> {
        token
            .verb_sense_ids
            .iter()
            .map(String::as_str)
            .chain(self.classes_of(&token.lemma))
            .collect()
    }
}
