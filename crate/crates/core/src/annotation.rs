//! Annotated sentences, seeds, and the versioned corpus/seed file formats.
//!
//! Annotation itself (parsing, role labelling, entity recognition) happens
//! upstream; this module only ingests and validates its output. Token indices
//! are positional and never stored in the files.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Interrogative openers accepted when no allowlist is supplied.
pub const DEFAULT_WH_WORDS: &[&str] = &[
    "who", "what", "when", "where", "why", "how", "which", "whom", "whose",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    /// Position in its sentence or question. Loaders recompute it, so corpus
    /// files may omit it.
    #[serde(default)]
    pub index: usize,
    pub surface: String,
    #[serde(default)]
    pub lemma: String,
    pub pos: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ne_type: Option<String>,
    #[serde(default, rename = "synsets", skip_serializing_if = "Vec::is_empty")]
    pub synset_ids: Vec<String>,
    #[serde(default, rename = "verb_senses", skip_serializing_if = "Vec::is_empty")]
    pub verb_sense_ids: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding_key: Option<String>,
    #[serde(default, rename = "stopword", skip_serializing_if = "is_false")]
    pub is_stopword: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl Token {
    /// A bare token with lemma defaulted to the lowercased surface.
    pub fn new(index: usize, surface: &str, pos: &str) -> Self {
        Token {
            index,
            surface: surface.to_string(),
            lemma: surface.to_lowercase(),
            pos: pos.to_string(),
            ne_type: None,
            synset_ids: Vec::new(),
            verb_sense_ids: Vec::new(),
            embedding_key: None,
            is_stopword: false,
        }
    }

    pub fn with_lemma(mut self, lemma: &str) -> Self {
        self.lemma = lemma.to_string();
        self
    }

    pub fn with_ne(mut self, ne_type: &str) -> Self {
        self.ne_type = Some(ne_type.to_string());
        self
    }

    pub fn with_synsets(mut self, ids: &[&str]) -> Self {
        self.synset_ids = ids.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_senses(mut self, ids: &[&str]) -> Self {
        self.verb_sense_ids = ids.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_embedding(mut self, key: &str) -> Self {
        self.embedding_key = Some(key.to_string());
        self
    }

    pub fn is_verb(&self) -> bool {
        self.pos.starts_with("VB")
    }

    pub fn is_punctuation(&self) -> bool {
        !self.surface.is_empty() && self.surface.chars().all(|c| !c.is_alphanumeric())
    }

    pub fn surface_eq(&self, other: &Token) -> bool {
        self.surface.to_lowercase() == other.surface.to_lowercase()
    }

    fn normalize(&mut self, index: usize) {
        self.index = index;
        if self.lemma.is_empty() {
            self.lemma = self.surface.to_lowercase();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstituencyNode {
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ConstituencyNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_index: Option<usize>,
}

impl ConstituencyNode {
    pub fn leaf(label: &str, token_index: usize) -> Self {
        ConstituencyNode {
            label: label.to_string(),
            children: Vec::new(),
            token_index: Some(token_index),
        }
    }

    pub fn node(label: &str, children: Vec<ConstituencyNode>) -> Self {
        ConstituencyNode {
            label: label.to_string(),
            children,
            token_index: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.token_index.is_some()
    }

    /// Token indices of the leaves, in order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self.token_index {
            Some(i) => out.push(i),
            None => self.children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Inclusive token range covered by this node.
    pub fn span(&self) -> Option<(usize, usize)> {
        let leaves = self.leaves();
        Some((*leaves.first()?, *leaves.last()?))
    }

    /// Nodes in pre-order, starting with `self`.
    pub fn preorder(&self) -> Vec<&ConstituencyNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.children.iter().rev());
        }
        out
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Parses a bracketed tree such as `(NP (DT the) (NN telephone))`.
    /// Leaves get consecutive token indices starting at `first_index`; the
    /// words are returned alongside.
    pub fn from_bracketed(text: &str, first_index: usize) -> Option<(Self, Vec<String>)> {
        let mut words = Vec::new();
        let tokens = bracket_tokens(text);
        let mut pos = 0;
        let node = parse_bracketed(&tokens, &mut pos, first_index, &mut words)?;
        (pos == tokens.len()).then_some((node, words))
    }

    /// Bracketed rendering with leaf surfaces taken from `tokens`.
    pub fn render(&self, tokens: &[Token]) -> String {
        match self.token_index {
            Some(i) => {
                let word = tokens.get(i).map(|t| t.surface.as_str()).unwrap_or("?");
                format!("({} {})", self.label, word)
            }
            None => {
                let inner: Vec<String> = self.children.iter().map(|c| c.render(tokens)).collect();
                format!("({} {})", self.label, inner.join(" "))
            }
        }
    }
}

fn bracket_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_bracketed(
    toks: &[String],
    pos: &mut usize,
    first_index: usize,
    words: &mut Vec<String>,
) -> Option<ConstituencyNode> {
    if toks.get(*pos)? != "(" {
        return None;
    }
    *pos += 1;
    let label = toks.get(*pos)?.clone();
    if label == "(" || label == ")" {
        return None;
    }
    *pos += 1;
    match toks.get(*pos)?.as_str() {
        "(" => {
            let mut children = Vec::new();
            while toks.get(*pos)? == "(" {
                children.push(parse_bracketed(toks, pos, first_index, words)?);
            }
            if toks.get(*pos)? != ")" {
                return None;
            }
            *pos += 1;
            Some(ConstituencyNode::node(&label, children))
        }
        ")" => None,
        _ => {
            // Multi-word leaves (collapsed entities) keep their inner spaces.
            let mut word = Vec::new();
            while toks.get(*pos)? != ")" {
                if toks[*pos] == "(" {
                    return None;
                }
                word.push(toks[*pos].clone());
                *pos += 1;
            }
            *pos += 1;
            let idx = first_index + words.len();
            words.push(word.join(" "));
            Some(ConstituencyNode::leaf(&label, idx))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyEdge {
    pub head: usize,
    pub dependent: usize,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrlArgument {
    pub label: String,
    /// Inclusive token range.
    pub span: [usize; 2],
}

impl SrlArgument {
    pub fn new(label: &str, start: usize, end: usize) -> Self {
        SrlArgument {
            label: label.to_string(),
            span: [start, end],
        }
    }

    pub fn contains(&self, index: usize) -> bool {
        self.span[0] <= index && index <= self.span[1]
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.span[0]..=self.span[1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrlFrame {
    pub predicate_index: usize,
    #[serde(rename = "args")]
    pub arguments: Vec<SrlArgument>,
}

impl SrlFrame {
    pub fn argument(&self, label: &str) -> Option<&SrlArgument> {
        self.arguments.iter().find(|a| a.label == label)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub id: String,
    pub tokens: Vec<Token>,
    pub constituency: ConstituencyNode,
    #[serde(default)]
    pub dependencies: Vec<DependencyEdge>,
    #[serde(default, rename = "srl")]
    pub srl_frames: Vec<SrlFrame>,
}

impl AnnotatedSentence {
    pub fn text(&self) -> String {
        crate::text::render(self.tokens.iter().map(|t| t.surface.as_str()))
    }

    /// Reassigns token indices and lemma defaults, then validates.
    pub fn normalize(&mut self) -> Result<()> {
        for (i, t) in self.tokens.iter_mut().enumerate() {
            t.normalize(i);
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let id = self.id.as_str();
        let n = self.tokens.len();
        if id.is_empty() {
            return Err(Error::invalid("<unnamed>", "id", "sentence id is empty"));
        }
        if n == 0 {
            return Err(Error::invalid(id, "tokens", "sentence has no tokens"));
        }
        for (i, t) in self.tokens.iter().enumerate() {
            if t.index != i {
                return Err(Error::invalid(
                    id,
                    format!("tokens[{i}].index"),
                    format!("expected {i}, found {}", t.index),
                ));
            }
            if t.surface.is_empty() {
                return Err(Error::invalid(id, format!("tokens[{i}].surface"), "empty surface"));
            }
            if t.pos.is_empty() {
                return Err(Error::invalid(id, format!("tokens[{i}].pos"), "empty POS tag"));
            }
            if matches!(&t.ne_type, Some(ne) if ne.is_empty()) {
                return Err(Error::invalid(id, format!("tokens[{i}].ne_type"), "empty NE type"));
            }
        }
        validate_tree(id, &self.constituency, n, "constituency")?;
        let leaves = self.constituency.leaves();
        if leaves != (0..n).collect::<Vec<_>>() {
            return Err(Error::invalid(
                id,
                "constituency",
                format!("leaves {leaves:?} do not enumerate tokens 0..{n} in order"),
            ));
        }
        for (i, e) in self.dependencies.iter().enumerate() {
            if e.head >= n || e.dependent >= n {
                return Err(Error::invalid(
                    id,
                    format!("dependencies[{i}]"),
                    format!("edge {}->{} references a token outside 0..{n}", e.head, e.dependent),
                ));
            }
            if e.head == e.dependent {
                return Err(Error::invalid(id, format!("dependencies[{i}]"), "self loop"));
            }
        }
        for (fi, f) in self.srl_frames.iter().enumerate() {
            let field = format!("srl[{fi}]");
            let pred = self.tokens.get(f.predicate_index).ok_or_else(|| {
                Error::invalid(
                    id,
                    format!("{field}.predicate_index"),
                    format!("{} is outside 0..{n}", f.predicate_index),
                )
            })?;
            if !pred.is_verb() {
                return Err(Error::invalid(
                    id,
                    format!("{field}.predicate_index"),
                    format!("predicate `{}` has non-verbal POS {}", pred.surface, pred.pos),
                ));
            }
            let mut labels = HashSet::new();
            for (ai, a) in f.arguments.iter().enumerate() {
                let [s, e] = a.span;
                if s > e || e >= n {
                    return Err(Error::invalid(
                        id,
                        format!("{field}.args[{ai}].span"),
                        format!("[{s}, {e}] is not a range inside 0..{n}"),
                    ));
                }
                if !labels.insert(a.label.as_str()) {
                    return Err(Error::invalid(
                        id,
                        format!("{field}.args[{ai}].label"),
                        format!("duplicate label {}", a.label),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn validate_tree(id: &str, node: &ConstituencyNode, n: usize, path: &str) -> Result<()> {
    if node.label.is_empty() {
        return Err(Error::invalid(id, format!("{path}.label"), "empty label"));
    }
    match node.token_index {
        Some(i) => {
            if !node.children.is_empty() {
                return Err(Error::invalid(id, path, "leaf carries children"));
            }
            if i >= n {
                return Err(Error::invalid(
                    id,
                    format!("{path}.token_index"),
                    format!("token_index {i} is outside 0..{n}"),
                ));
            }
        }
        None => {
            if node.children.is_empty() {
                return Err(Error::invalid(id, path, "internal node without children"));
            }
            for (ci, c) in node.children.iter().enumerate() {
                validate_tree(id, c, n, &format!("{path}.children[{ci}]"))?;
            }
        }
    }
    Ok(())
}

/// Answer side of a seed: either a span of the support sentence or free
/// tokens (used when a correction no longer lines up with the sentence).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Span { start: usize, end: usize },
    Tokens(Vec<Token>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub id: String,
    pub sentence: AnnotatedSentence,
    pub question: Vec<Token>,
    pub answer: Answer,
}

impl Seed {
    pub fn answer_tokens(&self) -> Vec<Token> {
        match &self.answer {
            Answer::Span { start, end } => self.sentence.tokens[*start..=*end].to_vec(),
            Answer::Tokens(t) => t.clone(),
        }
    }

    /// Restores positional token indices after deserialization.
    pub fn reindex(&mut self) {
        for (i, t) in self.sentence.tokens.iter_mut().enumerate() {
            t.index = i;
        }
        for (i, t) in self.question.iter_mut().enumerate() {
            t.index = i;
        }
        if let Answer::Tokens(tokens) = &mut self.answer {
            for (i, t) in tokens.iter_mut().enumerate() {
                t.index = i;
            }
        }
    }

    pub fn wh_word(&self) -> &str {
        &self.question[0].surface
    }

    pub fn question_text(&self) -> String {
        crate::text::render(self.question.iter().map(|t| t.surface.as_str()))
    }

    pub fn validate(&self, wh_words: &[String]) -> Result<()> {
        self.sentence.validate()?;
        let id = self.id.as_str();
        let first = self
            .question
            .first()
            .ok_or_else(|| Error::invalid(id, "question.tokens", "question is empty"))?;
        if !is_wh_word(&first.surface, wh_words) {
            return Err(Error::invalid(
                id,
                "question.tokens[0]",
                format!("`{}` is not a Wh-word", first.surface),
            ));
        }
        for (i, t) in self.question.iter().enumerate() {
            if t.index != i {
                return Err(Error::invalid(id, format!("question.tokens[{i}].index"), "non-positional index"));
            }
        }
        match &self.answer {
            Answer::Span { start, end } => {
                if start > end || *end >= self.sentence.tokens.len() {
                    return Err(Error::invalid(
                        id,
                        "answer_span",
                        format!("[{start}, {end}] is not inside the support sentence"),
                    ));
                }
            }
            Answer::Tokens(t) if t.is_empty() => {
                return Err(Error::invalid(id, "answer.tokens", "answer is empty"));
            }
            Answer::Tokens(_) => {}
        }
        Ok(())
    }
}

pub fn is_wh_word(word: &str, allowlist: &[String]) -> bool {
    let w = word.to_lowercase();
    allowlist.contains(&w)
}

pub fn default_wh_words() -> Vec<String> {
    DEFAULT_WH_WORDS.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct CorpusFile {
    schema_version: u32,
    sentences: Vec<AnnotatedSentence>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TokenList {
    tokens: Vec<Token>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SeedRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sentence: Option<AnnotatedSentence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sentence_ref: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    question: Option<TokenList>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    answer_span: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    answer: Option<TokenList>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SeedFile {
    schema_version: u32,
    seeds: Vec<SeedRecord>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Option<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim().is_empty() {
        return Ok(None);
    }
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable value");
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn check_version(found: u32) -> Result<()> {
    if found != SCHEMA_VERSION {
        return Err(Error::SchemaVersion {
            found,
            expected: SCHEMA_VERSION,
        });
    }
    Ok(())
}

pub fn parse_corpus(text: &str) -> Result<Vec<AnnotatedSentence>> {
    let file: CorpusFile = serde_json::from_str(text).map_err(|e| Error::Json {
        path: "<inline>".into(),
        source: e,
    })?;
    finish_corpus(file)
}

fn finish_corpus(file: CorpusFile) -> Result<Vec<AnnotatedSentence>> {
    check_version(file.schema_version)?;
    let mut ids = HashSet::new();
    let mut sentences = file.sentences;
    for s in sentences.iter_mut() {
        s.normalize()?;
        if !ids.insert(s.id.clone()) {
            return Err(Error::invalid(s.id.as_str(), "id", "duplicate sentence id"));
        }
    }
    Ok(sentences)
}

/// Loads and validates a corpus file. Sentences keep file order.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<AnnotatedSentence>> {
    match read_json::<CorpusFile>(path.as_ref())? {
        Some(file) => finish_corpus(file),
        None => Ok(Vec::new()),
    }
}

pub fn save_corpus(path: impl AsRef<Path>, sentences: &[AnnotatedSentence]) -> Result<()> {
    write_json(
        path.as_ref(),
        &CorpusFile {
            schema_version: SCHEMA_VERSION,
            sentences: sentences.to_vec(),
        },
    )
}

pub fn load_seeds(path: impl AsRef<Path>) -> Result<Vec<Seed>> {
    load_seeds_with(path, &[], &default_wh_words())
}

/// Loads seeds, resolving `sentence_ref` entries against `corpus`.
pub fn load_seeds_with(
    path: impl AsRef<Path>,
    corpus: &[AnnotatedSentence],
    wh_words: &[String],
) -> Result<Vec<Seed>> {
    let Some(file) = read_json::<SeedFile>(path.as_ref())? else {
        return Ok(Vec::new());
    };
    check_version(file.schema_version)?;
    file.seeds
        .into_iter()
        .enumerate()
        .map(|(i, rec)| seed_from_record(i, rec, corpus, wh_words))
        .collect()
}

fn seed_from_record(
    position: usize,
    rec: SeedRecord,
    corpus: &[AnnotatedSentence],
    wh_words: &[String],
) -> Result<Seed> {
    let id = rec.id.unwrap_or_else(|| format!("seed-{position}"));
    let mut sentence = match (rec.sentence, rec.sentence_ref) {
        (Some(s), _) => s,
        (None, Some(r)) => corpus
            .iter()
            .find(|s| s.id == r)
            .cloned()
            .ok_or_else(|| Error::invalid(&id, "sentence_ref", format!("unknown sentence `{r}`")))?,
        (None, None) => return Err(Error::invalid(&id, "sentence", "missing support sentence")),
    };
    sentence.normalize()?;
    let mut question = rec
        .question
        .ok_or_else(|| Error::invalid(&id, "question", "missing question"))?
        .tokens;
    for (i, t) in question.iter_mut().enumerate() {
        t.normalize(i);
    }
    let answer = match (rec.answer_span, rec.answer) {
        (Some([start, end]), _) => Answer::Span { start, end },
        (None, Some(list)) => {
            let mut tokens = list.tokens;
            for (i, t) in tokens.iter_mut().enumerate() {
                t.normalize(i);
            }
            Answer::Tokens(tokens)
        }
        (None, None) => return Err(Error::invalid(&id, "answer_span", "missing answer")),
    };
    let seed = Seed {
        id,
        sentence,
        question,
        answer,
    };
    seed.validate(wh_words)?;
    Ok(seed)
}

pub fn save_seeds(path: impl AsRef<Path>, seeds: &[Seed]) -> Result<()> {
    write_json(
        path.as_ref(),
        &SeedFile {
            schema_version: SCHEMA_VERSION,
            seeds: seeds.iter().map(seed_record).collect(),
        },
    )
}

fn seed_record(seed: &Seed) -> SeedRecord {
    let (answer_span, answer) = match &seed.answer {
        Answer::Span { start, end } => (Some([*start, *end]), None),
        Answer::Tokens(t) => (None, Some(TokenList { tokens: t.clone() })),
    };
    SeedRecord {
        id: Some(seed.id.clone()),
        sentence: Some(seed.sentence.clone()),
        sentence_ref: None,
        question: Some(TokenList {
            tokens: seed.question.clone(),
        }),
        answer_span,
        answer,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentence() -> AnnotatedSentence {
        let (tree, words) =
            ConstituencyNode::from_bracketed("(S (NP (NNP Bob)) (VP (VBD baked) (NP (NNS cookies))))", 0)
                .unwrap();
        let pos = ["NNP", "VBD", "NNS"];
        AnnotatedSentence {
            id: "s1".into(),
            tokens: words
                .iter()
                .zip(pos)
                .enumerate()
                .map(|(i, (w, p))| Token::new(i, w, p))
                .collect(),
            constituency: tree,
            dependencies: vec![DependencyEdge {
                head: 1,
                dependent: 0,
                relation: "nsubj".into(),
            }],
            srl_frames: vec![SrlFrame {
                predicate_index: 1,
                arguments: vec![SrlArgument::new("A0", 0, 0), SrlArgument::new("A1", 2, 2)],
            }],
        }
    }

    #[test]
    fn bracketed_parse_assigns_leaf_indices() {
        let (tree, words) =
            ConstituencyNode::from_bracketed("(NP (DT the) (NNP Alexander Graham Bell))", 3).unwrap();
        assert_eq!(words, vec!["the", "Alexander Graham Bell"]);
        assert_eq!(tree.leaves(), vec![3, 4]);
        assert!(ConstituencyNode::from_bracketed("(NP (DT the)", 0).is_none());
    }

    #[test]
    fn valid_sentence_passes() {
        sentence().validate().unwrap();
    }

    #[test]
    fn leaf_out_of_range_is_rejected() {
        let mut s = sentence();
        s.constituency.children[1].children[1].children[0].token_index = Some(3);
        let err = s.validate().unwrap_err();
        match err {
            Error::Invalid { record, field, .. } => {
                assert_eq!(record, "s1");
                assert!(field.contains("token_index"), "{field}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_verbal_predicate_is_rejected() {
        let mut s = sentence();
        s.srl_frames[0].predicate_index = 0;
        assert!(matches!(s.validate(), Err(Error::Invalid { field, .. }) if field == "srl[0].predicate_index"));
    }

    #[test]
    fn duplicate_argument_labels_are_rejected() {
        let mut s = sentence();
        s.srl_frames[0].arguments[1].label = "A0".into();
        assert!(s.validate().is_err());
    }

    #[test]
    fn dependency_self_loop_is_rejected() {
        let mut s = sentence();
        s.dependencies[0].head = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn seed_requires_leading_wh_word() {
        let q: Vec<Token> = ["Bob", "baked", "?"]
            .iter()
            .enumerate()
            .map(|(i, w)| Token::new(i, w, "X"))
            .collect();
        let seed = Seed {
            id: "x".into(),
            sentence: sentence(),
            question: q,
            answer: Answer::Span { start: 2, end: 2 },
        };
        let err = seed.validate(&default_wh_words()).unwrap_err();
        assert!(matches!(err, Error::Invalid { field, .. } if field == "question.tokens[0]"));
    }

    #[test]
    fn multi_word_wh_opener_only_checks_first_token() {
        let q: Vec<Token> = ["How", "far", "is", "Bob", "?"]
            .iter()
            .enumerate()
            .map(|(i, w)| Token::new(i, w, "X"))
            .collect();
        let seed = Seed {
            id: "x".into(),
            sentence: sentence(),
            question: q,
            answer: Answer::Span { start: 2, end: 2 },
        };
        seed.validate(&default_wh_words()).unwrap();
    }
}
