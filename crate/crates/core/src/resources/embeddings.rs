use std::collections::HashMap;

use crate::annotation::Token;
use crate::error::{Error, Result};

/// Dense word vectors keyed by word (or phrase key such as `New_York`).
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl Default for EmbeddingTable {
    fn default() -> Self {
        EmbeddingTable {
            dim: 1,
            vectors: HashMap::new(),
        }
    }
}

fn resource_err(line: usize, message: impl Into<String>) -> Error {
    Error::Resource {
        resource: "embeddings".into(),
        line,
        message: message.into(),
    }
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        Ok(EmbeddingTable {
            dim,
            vectors: HashMap::new(),
        })
    }

    /// Parses the word2vec text format: a `count dim` header, then
    /// `key v1 ... vdim` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| resource_err(1, "missing header"))?;
        let mut fields = header.split_whitespace();
        let count: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| resource_err(1, "header must be `count dim`"))?;
        let dim: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .filter(|d| *d > 0)
            .ok_or_else(|| resource_err(1, "header must be `count dim` with dim > 0"))?;
        let mut table = EmbeddingTable::new(dim)?;
        for (lineno, line) in lines {
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let values: Vec<f64> = parts
                .map(|v| v.parse::<f64>().map_err(|_| resource_err(lineno + 1, format!("bad number `{v}`"))))
                .collect::<Result<_>>()?;
            table
                .insert(key, values)
                .map_err(|e| resource_err(lineno + 1, e.to_string()))?;
        }
        if table.len() != count {
            return Err(resource_err(1, format!("header declares {count} vectors, found {}", table.len())));
        }
        Ok(table)
    }

    pub fn insert(&mut self, key: &str, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::Config(format!(
                "vector for `{key}` has {} components, expected {}",
                vector.len(),
                self.dim
            )));
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!("vector for `{key}` has non-finite components")));
        }
        self.vectors.insert(key.to_string(), vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&[f64]> {
        self.vectors
            .get(key)
            .or_else(|| self.vectors.get(&key.to_lowercase()))
            .map(Vec::as_slice)
    }

    /// Vector for a word or phrase: the phrase itself (spaces as `_`) when
    /// present, otherwise the sum of its known word vectors.
    pub fn phrase_vector(&self, text: &str) -> Option<Vec<f64>> {
        if let Some(v) = self.get(text).or_else(|| self.get(&text.replace(' ', "_"))) {
            return Some(v.to_vec());
        }
        let words: Vec<&str> = text.split_whitespace().collect();
        if words.len() < 2 {
            return None;
        }
        let mut sum = vec![0.0; self.dim];
        let mut found = false;
        for w in words {
            if let Some(v) = self.get(w) {
                found = true;
                sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
            }
        }
        found.then_some(sum)
    }

    pub fn token_vector(&self, token: &Token) -> Option<Vec<f64>> {
        match &token.embedding_key {
            Some(key) => self.phrase_vector(key),
            None => self.phrase_vector(&token.surface),
        }
    }
}

/// Cosine similarity; `None` when either vector has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    Some((dot / (na * nb)).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_and_vectors() {
        let t = EmbeddingTable::parse("2 3\ncar 1 0 0\nNew_York 0 1 0\n").unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.get("car"), Some(&[1.0, 0.0, 0.0][..]));
        assert_eq!(t.phrase_vector("New York"), Some(vec![0.0, 1.0, 0.0]));
    }

    #[test]
    fn rejects_wrong_dimension_and_count() {
        assert!(EmbeddingTable::parse("1 3\ncar 1 0\n").is_err());
        assert!(EmbeddingTable::parse("2 3\ncar 1 0 0\n").is_err());
        assert!(EmbeddingTable::parse("1 2\ncar NaN 0\n").is_err());
    }

    #[test]
    fn phrase_vector_sums_words() {
        let t = EmbeddingTable::parse("2 2\nsea 1 0\nroute 0 2\n").unwrap();
        assert_eq!(t.phrase_vector("sea route"), Some(vec![1.0, 2.0]));
        assert_eq!(t.phrase_vector("ocean"), None);
    }

    #[test]
    fn cosine_of_zero_vector_is_none() {
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]), None);
        assert!((cosine(&[1.0, 1.0], &[1.0, 0.0]).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }
}
