//! Verb tense handling for generated questions.

use serde::{Deserialize, Serialize};

use crate::annotation::Token;
use crate::resources::VerbLexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    Past,
    Present,
    Future,
}

const DO_AUX: &[&str] = &["do", "does", "did", "will"];
const BE_AUX: &[&str] = &["is", "are", "was", "were", "am"];
const HAVE_AUX: &[&str] = &["has", "have", "had"];

fn aux_tense(word: &str) -> Option<Tense> {
    match word.to_lowercase().as_str() {
        "will" | "shall" | "'ll" => Some(Tense::Future),
        "was" | "were" | "had" | "did" => Some(Tense::Past),
        "is" | "are" | "am" | "has" | "have" | "does" | "do" | "'s" => Some(Tense::Present),
        _ => None,
    }
}

/// Tense of the predicate at `index`: finite tags decide directly, other
/// forms look back for an auxiliary or modal (skipping adverbs and
/// negation).
pub fn predicate_tense(tokens: &[Token], index: usize) -> Tense {
    match tokens[index].pos.as_str() {
        "VBD" => return Tense::Past,
        "VBZ" | "VBP" => return Tense::Present,
        _ => {}
    }
    for t in tokens[..index].iter().rev().take(4) {
        if let Some(tense) = aux_tense(&t.surface) {
            return tense;
        }
        if !(t.pos.starts_with("RB") || t.pos.starts_with("VB") || t.pos == "MD") {
            break;
        }
    }
    Tense::Past
}

fn is_finite(pos: &str) -> bool {
    matches!(pos, "VBD" | "VBZ" | "VBP")
}

/// Auxiliary found in a question before its main verb.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxKind {
    Do,
    Be,
    Have,
}

pub fn find_auxiliary(question: &[Token], verb_index: usize, linked: &[usize]) -> Option<(usize, AuxKind)> {
    (1..verb_index).rev().find_map(|i| {
        if linked.contains(&i) {
            return None;
        }
        let w = question[i].surface.to_lowercase();
        if DO_AUX.contains(&w.as_str()) {
            Some((i, AuxKind::Do))
        } else if BE_AUX.contains(&w.as_str()) {
            Some((i, AuxKind::Be))
        } else if HAVE_AUX.contains(&w.as_str()) {
            Some((i, AuxKind::Have))
        } else {
            None
        }
    })
}

/// Rewritten auxiliary and main verb for a question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbRealization {
    pub auxiliary: Option<(usize, String)>,
    pub verb: String,
}

/// Adjusts the question's verb group to the candidate predicate.
///
/// `same_lemma` means the candidate predicate has the lemma of the pattern's
/// predicate: the question keeps its own verb, and is left untouched when
/// the tense also agrees.
#[allow(clippy::too_many_arguments)]
pub fn realize_verb(
    question: &[Token],
    verb_index: usize,
    linked: &[usize],
    candidate: &Token,
    candidate_tense: Tense,
    pattern_tense: Tense,
    same_lemma: bool,
    verbs: &VerbLexicon,
) -> VerbRealization {
    let q_verb = &question[verb_index];
    let aux = find_auxiliary(question, verb_index, linked);
    if same_lemma && candidate_tense == pattern_tense {
        return VerbRealization {
            auxiliary: None,
            verb: q_verb.surface.clone(),
        };
    }
    let lemma = if same_lemma {
        q_verb.lemma.to_lowercase()
    } else {
        candidate.lemma.to_lowercase()
    };
    match aux {
        Some((ai, AuxKind::Do)) => {
            let original = question[ai].surface.to_lowercase();
            let new_aux = match candidate_tense {
                Tense::Past => "did".to_string(),
                Tense::Present if original == "do" => "do".to_string(),
                Tense::Present => "does".to_string(),
                Tense::Future => "will".to_string(),
            };
            VerbRealization {
                auxiliary: Some((ai, new_aux)),
                verb: lemma,
            }
        }
        Some((ai, AuxKind::Be)) => {
            let plural = matches!(question[ai].surface.to_lowercase().as_str(), "are" | "were");
            let new_aux = match (candidate_tense, plural) {
                (Tense::Past, false) => "was",
                (Tense::Past, true) => "were",
                (Tense::Present, false) => "is",
                (Tense::Present, true) => "are",
                (Tense::Future, _) => "will be",
            };
            VerbRealization {
                auxiliary: Some((ai, new_aux.to_string())),
                verb: verbs.inflect(&lemma, &q_verb.pos),
            }
        }
        Some((ai, AuxKind::Have)) => {
            let plural = question[ai].surface.eq_ignore_ascii_case("have");
            let new_aux = match (candidate_tense, plural) {
                (Tense::Past, _) => "had",
                (Tense::Present, false) => "has",
                (Tense::Present, true) => "have",
                (Tense::Future, _) => "will have",
            };
            VerbRealization {
                auxiliary: Some((ai, new_aux.to_string())),
                verb: verbs.participle(&lemma),
            }
        }
        None => {
            let verb = if !same_lemma && is_finite(&candidate.pos) {
                candidate.surface.to_lowercase()
            } else {
                match candidate_tense {
                    Tense::Past => verbs.past(&lemma),
                    Tense::Present => verbs.third_person(&lemma),
                    Tense::Future => format!("will {lemma}"),
                }
            };
            VerbRealization { auxiliary: None, verb }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(spec: &[(&str, &str, &str)]) -> Vec<Token> {
        spec.iter()
            .enumerate()
            .map(|(i, (s, l, p))| Token::new(i, s, p).with_lemma(l))
            .collect()
    }

    #[test]
    fn tense_from_tags_and_auxiliaries() {
        let s = toks(&[("Bob", "bob", "NNP"), ("will", "will", "MD"), ("bake", "bake", "VB")]);
        assert_eq!(predicate_tense(&s, 2), Tense::Future);
        let s = toks(&[("AGB", "agb", "NNP"), ("is", "be", "VBZ"), ("credited", "credit", "VBN")]);
        assert_eq!(predicate_tense(&s, 2), Tense::Present);
        let s = toks(&[("VDG", "vdg", "NNP"), ("discovered", "discover", "VBD")]);
        assert_eq!(predicate_tense(&s, 1), Tense::Past);
    }

    #[test]
    fn do_support_switches_to_base_form() {
        let q = toks(&[("What", "what", "WP"), ("did", "do", "VBD"), ("Bob", "bob", "NNP"), ("bake", "bake", "VB"), ("?", "?", ".")]);
        let cand = Token::new(0, "builds", "VBZ").with_lemma("build");
        let r = realize_verb(&q, 3, &[2, 3], &cand, Tense::Present, Tense::Past, false, &VerbLexicon::default());
        assert_eq!(r.auxiliary, Some((1, "does".into())));
        assert_eq!(r.verb, "build");
    }

    #[test]
    fn no_auxiliary_copies_finite_candidate() {
        let q = toks(&[("Who", "who", "WP"), ("created", "create", "VBD"), ("it", "it", "PRP")]);
        let cand = Token::new(0, "discovered", "VBD").with_lemma("discover");
        let r = realize_verb(&q, 1, &[1], &cand, Tense::Past, Tense::Present, false, &VerbLexicon::default());
        assert_eq!(r, VerbRealization { auxiliary: None, verb: "discovered".into() });
        let cand = Token::new(0, "finding", "VBG").with_lemma("find");
        let r = realize_verb(&q, 1, &[1], &cand, Tense::Past, Tense::Present, false, &VerbLexicon::default());
        assert_eq!(r.verb, "found");
    }

    #[test]
    fn same_lemma_keeps_question_verb() {
        let q = toks(&[("Who", "who", "WP"), ("created", "create", "VBD"), ("it", "it", "PRP")]);
        let cand = Token::new(0, "inventing", "VBG").with_lemma("invent");
        let r = realize_verb(&q, 1, &[1], &cand, Tense::Present, Tense::Present, true, &VerbLexicon::default());
        assert_eq!(r.verb, "created");
        let r = realize_verb(&q, 1, &[1], &cand, Tense::Future, Tense::Present, true, &VerbLexicon::default());
        assert_eq!(r.verb, "will create");
    }
}
