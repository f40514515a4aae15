//! Pattern-based question generation that learns from reviewer feedback.
//!
//! Seeds (sentence, question, answer) are aligned token by token and turned
//! into patterns over the sentence's predicate-argument structure. Patterns
//! are matched against new annotated sentences to produce questions, which a
//! reviewer keeps, edits or discards; corrections become new seeds and
//! re-weight the patterns that produced them.

pub mod acquisition;
pub mod alignment;
pub mod annotation;
pub mod error;
pub mod feedback;
pub mod generation;
pub mod metrics;
pub mod orchestration;
pub mod persistence;
pub mod resources;
pub mod similarity;
pub mod text;

pub use error::{Error, Result};
