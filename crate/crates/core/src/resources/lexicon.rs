use std::collections::{HashMap, HashSet};

use crate::annotation::Token;
use crate::error::{Error, Result};

const ENGLISH_STOPWORDS: &str = "a about above after again against all am an and any are as at be because been \
before being below between both but by can could did do does doing down during each few for from further \
had has have having he her here hers herself him himself his i if in into is it its itself just me more most \
my myself no nor not now of off on once only or other our ours ourselves out over own same she should so \
some such than that the their theirs them themselves then there these they this those through to too under \
until up very was we were what when where which while who whom why will with would you your yours yourself \
yourselves how whose 's";

#[derive(Debug, Clone, PartialEq)]
pub struct Stopwords {
    words: HashSet<String>,
}

impl Default for Stopwords {
    fn default() -> Self {
        Stopwords::english()
    }
}

impl Stopwords {
    pub fn english() -> Self {
        Stopwords::from_words(ENGLISH_STOPWORDS.split_whitespace())
    }

    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        Stopwords {
            words: words.into_iter().map(|w| w.trim().to_lowercase()).filter(|w| !w.is_empty()).collect(),
        }
    }

    /// One word per line; `#` starts a comment line.
    pub fn parse(text: &str) -> Self {
        Stopwords::from_words(text.lines().filter(|l| !l.trim_start().starts_with('#')))
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.words.contains(&word.to_lowercase())
    }

    /// Stopword flag on the token, listed word, or bare punctuation.
    pub fn is_stopword(&self, token: &Token) -> bool {
        token.is_stopword || token.is_punctuation() || self.contains_word(&token.surface)
    }
}

const IRREGULAR_VERBS: &str = "be was been\nhave had had\ndo did done\ngo went gone\nmake made made\n\
build built built\ntake took taken\nfind found found\nwrite wrote written\nbuy bought bought\nbear bore born\n\
give gave given\nsee saw seen\nget got gotten\nbring brought brought\nthink thought thought\nteach taught taught\n\
leave left left\nbegin began begun\ndraw drew drawn\nknow knew known\nsell sold sold\nhold held held\n\
lead led led\nwin won won\nrun ran run\nmeet met met\nput put put\nset set set\nshoot shot shot\nsay said said\n\
tell told told\nbecome became become\nfall fell fallen\nlose lost lost\nsend sent sent\nspend spent spent\n\
break broke broken\nchoose chose chosen\nspeak spoke spoken\nstand stood stood\nundertake undertook undertaken";

/// Verb inflection: irregular forms from a table, regular morphology
/// otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct VerbLexicon {
    irregular: HashMap<String, (String, String)>,
}

impl Default for VerbLexicon {
    fn default() -> Self {
        VerbLexicon::parse(IRREGULAR_VERBS).expect("built-in verb table")
    }
}

impl VerbLexicon {
    pub fn empty() -> Self {
        VerbLexicon {
            irregular: HashMap::new(),
        }
    }

    /// Parses `base past participle` lines (tab or space separated).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = VerbLexicon::empty();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Resource {
                    resource: "verb lexicon".into(),
                    line: lineno + 1,
                    message: "expected `base past participle`".into(),
                });
            }
            lex.irregular
                .insert(f[0].to_lowercase(), (f[1].to_lowercase(), f[2].to_lowercase()));
        }
        Ok(lex)
    }

    /// Adds entries from `other`, overriding on conflict.
    pub fn extend(&mut self, other: VerbLexicon) {
        self.irregular.extend(other.irregular);
    }

    pub fn past(&self, lemma: &str) -> String {
        match self.irregular.get(lemma) {
            Some((past, _)) => past.clone(),
            None => regular_past(lemma),
        }
    }

    pub fn participle(&self, lemma: &str) -> String {
        match self.irregular.get(lemma) {
            Some((_, part)) => part.clone(),
            None => regular_past(lemma),
        }
    }

    pub fn third_person(&self, lemma: &str) -> String {
        match lemma {
            "be" => "is".into(),
            "have" => "has".into(),
            "do" => "does".into(),
            "go" => "goes".into(),
            _ if ends_with_sibilant(lemma) => format!("{lemma}es"),
            _ if consonant_y(lemma) => format!("{}ies", &lemma[..lemma.len() - 1]),
            _ => format!("{lemma}s"),
        }
    }

    pub fn gerund(&self, lemma: &str) -> String {
        if lemma == "be" {
            return "being".into();
        }
        if let Some(stem) = lemma.strip_suffix("ie") {
            return format!("{stem}ying");
        }
        if lemma.ends_with('e') && !lemma.ends_with("ee") && lemma.len() > 2 {
            return format!("{}ing", &lemma[..lemma.len() - 1]);
        }
        format!("{lemma}ing")
    }

    /// Form of `lemma` for a Penn verb tag.
    pub fn inflect(&self, lemma: &str, pos: &str) -> String {
        let lemma = lemma.to_lowercase();
        match pos {
            "VBD" => self.past(&lemma),
            "VBN" => self.participle(&lemma),
            "VBZ" => self.third_person(&lemma),
            "VBG" => self.gerund(&lemma),
            "VBP" if lemma == "be" => "are".into(),
            _ => lemma,
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn consonant_y(w: &str) -> bool {
    let mut rev = w.chars().rev();
    matches!((rev.next(), rev.next()), (Some('y'), Some(c)) if !is_vowel(c))
}

fn ends_with_sibilant(w: &str) -> bool {
    ["s", "x", "z", "ch", "sh"].iter().any(|s| w.ends_with(s))
}

fn regular_past(lemma: &str) -> String {
    if lemma.ends_with('e') {
        format!("{lemma}d")
    } else if consonant_y(lemma) {
        format!("{}ied", &lemma[..lemma.len() - 1])
    } else {
        format!("{lemma}ed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stopwords_cover_punctuation_and_flags() {
        let sw = Stopwords::english();
        assert!(sw.is_stopword(&Token::new(0, "The", "DT")));
        assert!(sw.is_stopword(&Token::new(0, "?", ".")));
        assert!(!sw.is_stopword(&Token::new(0, "telephone", "NN")));
        let mut t = Token::new(0, "telephone", "NN");
        t.is_stopword = true;
        assert!(sw.is_stopword(&t));
    }

    #[test]
    fn regular_and_irregular_inflection() {
        let lex = VerbLexicon::default();
        assert_eq!(lex.inflect("discover", "VBD"), "discovered");
        assert_eq!(lex.inflect("create", "VBD"), "created");
        assert_eq!(lex.inflect("find", "VBD"), "found");
        assert_eq!(lex.inflect("bake", "VBG"), "baking");
        assert_eq!(lex.inflect("carry", "VBZ"), "carries");
        assert_eq!(lex.inflect("bear", "VBN"), "born");
        assert_eq!(lex.inflect("Invent", "VB"), "invent");
    }

    #[test]
    fn lexicon_file_overrides() {
        let mut lex = VerbLexicon::default();
        lex.extend(VerbLexicon::parse("# forms\nslay slew slain\n").unwrap());
        assert_eq!(lex.past("slay"), "slew");
        assert!(VerbLexicon::parse("slay slew").is_err());
    }
}
