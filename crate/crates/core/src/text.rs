//! Word tokenization and rendering shared by corrections, references and
//! similarity scoring.

use std::sync::OnceLock;

use regex::Regex;

fn word_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[\p{L}\p{N}]+(?:['’.-][\p{L}\p{N}]+)*|[^\s\p{L}\p{N}]").unwrap())
}

/// Splits free text on whitespace and punctuation. Word-internal hyphens,
/// apostrophes and dots (`U.S`, `don't`) stay attached.
pub fn tokenize(text: &str) -> Vec<String> {
    word_regex()
        .find_iter(text)
        .map(|m| m.as_str().to_string())
        .collect()
}

/// Lowercased words of a rendered question, the unit every similarity and
/// metric operates on.
pub fn words<'a, I: IntoIterator<Item = &'a str>>(surfaces: I) -> Vec<String> {
    surfaces
        .into_iter()
        .flat_map(tokenize)
        .map(|w| w.to_lowercase())
        .collect()
}

fn attaches_left(word: &str) -> bool {
    matches!(word, "." | "," | "?" | "!" | ";" | ":" | ")" | "%" | "'s" | "n't")
}

/// Joins surfaces with single spaces, without a space before closing
/// punctuation.
pub fn render<'a, I: IntoIterator<Item = &'a str>>(surfaces: I) -> String {
    let mut out = String::new();
    for w in surfaces {
        if !out.is_empty() && !attaches_left(w) && !out.ends_with('(') {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

pub fn capitalize_first(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_punctuation_apart() {
        assert_eq!(
            tokenize("Who discovered the sea route to India?"),
            vec!["Who", "discovered", "the", "sea", "route", "to", "India", "?"]
        );
        assert_eq!(tokenize("What's 313 km, roughly?"), vec!["What's", "313", "km", ",", "roughly", "?"]);
    }

    #[test]
    fn render_round_trips_tokenize() {
        let text = "How far is Lisbon from Porto?";
        assert_eq!(render(tokenize(text).iter().map(|s| s.as_str())), text);
    }

    #[test]
    fn words_split_multiword_surfaces() {
        assert_eq!(words(["Vasco Da Gama", "?"]), vec!["vasco", "da", "gama", "?"]);
    }
}
