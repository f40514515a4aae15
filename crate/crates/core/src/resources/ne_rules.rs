use std::collections::BTreeSet;

use regex::Regex;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum NeRule {
    /// One name is a contiguous word subsequence of the other
    /// (`Obama` in `Barack Obama`).
    WordContainment,
    /// Collapsed dates (`D01 M01 Y2014`): the fields of one are a subset of
    /// the other's.
    DateFields,
}

/// Entity-inclusion tests, looked up by NE type in declaration order.
#[derive(Debug, Clone)]
pub struct NeInclusionRules {
    rules: Vec<(String, NeRule)>,
    date_field: Regex,
}

impl Default for NeInclusionRules {
    fn default() -> Self {
        NeInclusionRules::new(vec![
            ("Person".into(), NeRule::WordContainment),
            ("Organization".into(), NeRule::WordContainment),
            ("Location".into(), NeRule::WordContainment),
            ("Misc".into(), NeRule::WordContainment),
            ("Date".into(), NeRule::DateFields),
        ])
    }
}

impl NeInclusionRules {
    pub fn new(rules: Vec<(String, NeRule)>) -> Self {
        NeInclusionRules {
            rules,
            date_field: Regex::new(r"\b([DMY])(\d+)\b").unwrap(),
        }
    }

    /// Parses `ne_type<TAB>words|date` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| Error::Resource {
                resource: "ne rules".into(),
                line: lineno + 1,
                message: message.into(),
            };
            let (ty, kind) = line.split_once('\t').ok_or_else(|| err("expected `type<TAB>rule`"))?;
            let rule = match kind.trim() {
                "words" => NeRule::WordContainment,
                "date" => NeRule::DateFields,
                _ => return Err(err("rule must be `words` or `date`")),
            };
            rules.push((ty.trim().to_string(), rule));
        }
        Ok(NeInclusionRules::new(rules))
    }

    fn rule_for(&self, ne_type: &str) -> Option<&NeRule> {
        self.rules
            .iter()
            .find(|(t, _)| t.eq_ignore_ascii_case(ne_type))
            .map(|(_, r)| r)
    }

    /// Whether `a` and `b` refer to the same entity of type `ne_type`.
    /// Symmetric; unknown types never match.
    pub fn includes(&self, a: &str, b: &str, ne_type: &str) -> bool {
        match self.rule_for(ne_type) {
            Some(NeRule::WordContainment) => {
                word_contained(a, b) || word_contained(b, a)
            }
            Some(NeRule::DateFields) => {
                let fa = self.date_fields(a);
                let fb = self.date_fields(b);
                !fa.is_empty() && !fb.is_empty() && (fa.is_subset(&fb) || fb.is_subset(&fa))
            }
            None => false,
        }
    }

    fn date_fields(&self, s: &str) -> BTreeSet<(char, u32)> {
        self.date_field
            .captures_iter(s)
            .filter_map(|c| {
                let kind = c[1].chars().next()?;
                let value = c[2].parse().ok()?;
                Some((kind, value))
            })
            .collect()
    }
}

/// `needle` appears in `hay` as a whole-word run, case-insensitively.
fn word_contained(needle: &str, hay: &str) -> bool {
    let needle = needle.trim();
    if needle.is_empty() {
        return false;
    }
    let words: Vec<String> = needle.split_whitespace().map(regex::escape).collect();
    let pattern = format!(r"(?i)(?:^|\s){}(?:\s|$)", words.join(r"\s+"));
    Regex::new(&pattern).map(|re| re.is_match(hay)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn person_surname_is_included() {
        let r = NeInclusionRules::default();
        assert!(r.includes("Obama", "Barack Obama", "Person"));
        assert!(r.includes("Barack Obama", "Obama", "Person"));
        assert!(!r.includes("Bam", "Barack Obama", "Person"));
    }

    #[test]
    fn date_fields_subset() {
        let r = NeInclusionRules::default();
        assert!(r.includes("D01 M01 Y2014", "M01 Y2014", "Date"));
        assert!(!r.includes("D01 M02 Y2014", "M01 Y2014", "Date"));
        assert!(!r.includes("yesterday", "M01 Y2014", "Date"));
    }

    #[test]
    fn disjoint_locations_and_unknown_types() {
        let r = NeInclusionRules::default();
        assert!(!r.includes("Lisbon", "Porto", "Location"));
        assert!(!r.includes("Lisbon", "Lisbon", "Vehicle"));
    }

    #[test]
    fn parses_rule_file() {
        let r = NeInclusionRules::parse("Person\twords\nWhen\tdate\n").unwrap();
        assert!(r.includes("D01 M01 Y2014", "Y2014", "When"));
        assert!(!r.includes("Obama", "Barack Obama", "Location"));
        assert!(NeInclusionRules::parse("Person\tfuzzy\n").is_err());
    }
}
