//! Flexible node templates: a root label prefix plus sibling constraints
//! that may sit anywhere below the root.

use serde::{Deserialize, Serialize};

use crate::annotation::ConstituencyNode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeTemplate {
    pub source: ConstituencyNode,
    pub root_prefix: String,
    /// One prefix per child of the source root; matched as sisters of some
    /// common parent below the root.
    pub sibling_prefixes: Vec<String>,
}

fn prefix(label: &str) -> String {
    label.chars().next().map(String::from).unwrap_or_default()
}

/// A successful template match.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateMatch {
    /// Node matched by the root prefix.
    pub root_span: (usize, usize),
    /// Token indices of the matched chunk: the yield of the sisters' parent,
    /// or of the root when the template has no sibling constraints.
    pub chunk: Vec<usize>,
    /// Pattern leaf to candidate leaf pairs, by matched sister.
    pub leaf_pairs: Vec<(usize, usize)>,
}

pub fn compile_template(subtree: &ConstituencyNode) -> TreeTemplate {
    TreeTemplate {
        source: subtree.clone(),
        root_prefix: prefix(&subtree.label),
        sibling_prefixes: subtree.children.iter().map(|c| prefix(&c.label)).collect(),
    }
}

impl TreeTemplate {
    /// Tregex-style rendering, e.g. `/N* << (/D* $ /N*)`.
    pub fn expression(&self) -> String {
        let root = format!("/{}*", self.root_prefix);
        let sisters: Vec<String> = self.sibling_prefixes.iter().map(|p| format!("/{p}*")).collect();
        match sisters.len() {
            0 => root,
            1 => format!("{root} << {}", sisters[0]),
            _ => format!("{root} << ({})", sisters.join(" $ ")),
        }
    }

    /// Matches the template with `node` as root.
    pub fn match_at(&self, node: &ConstituencyNode) -> Option<TemplateMatch> {
        if !node.label.starts_with(&self.root_prefix) {
            return None;
        }
        let root_span = node.span()?;
        if self.sibling_prefixes.is_empty() {
            let chunk = node.leaves();
            let leaf_pairs = self
                .source
                .leaves()
                .into_iter()
                .zip(chunk.iter().copied())
                .collect();
            return Some(TemplateMatch {
                root_span,
                chunk,
                leaf_pairs,
            });
        }
        node.preorder().into_iter().find_map(|parent| {
            let assignment = self.assign_sisters(parent)?;
            let mut leaf_pairs = Vec::new();
            for (k, &ci) in assignment.iter().enumerate() {
                let pl = self.source.children[k].leaves();
                let cl = parent.children[ci].leaves();
                leaf_pairs.extend(pl.into_iter().zip(cl));
            }
            Some(TemplateMatch {
                root_span,
                chunk: parent.leaves(),
                leaf_pairs,
            })
        })
    }

    /// Injective assignment of sibling constraints to `parent`'s children,
    /// preferring the leftmost children.
    fn assign_sisters(&self, parent: &ConstituencyNode) -> Option<Vec<usize>> {
        fn go(prefixes: &[String], children: &[ConstituencyNode], used: &mut Vec<bool>, out: &mut Vec<usize>) -> bool {
            let k = out.len();
            if k == prefixes.len() {
                return true;
            }
            for (i, c) in children.iter().enumerate() {
                if !used[i] && c.label.starts_with(&prefixes[k]) {
                    used[i] = true;
                    out.push(i);
                    if go(prefixes, children, used, out) {
                        return true;
                    }
                    out.pop();
                    used[i] = false;
                }
            }
            false
        }
        if parent.children.len() < self.sibling_prefixes.len() {
            return None;
        }
        let mut out = Vec::new();
        let mut used = vec![false; parent.children.len()];
        go(&self.sibling_prefixes, &parent.children, &mut used, &mut out).then_some(out)
    }

    /// First match at `candidate` or any node below it, in pre-order.
    pub fn find(&self, candidate: &ConstituencyNode) -> Option<TemplateMatch> {
        candidate.preorder().into_iter().find_map(|n| self.match_at(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ConstituencyNode {
        ConstituencyNode::from_bracketed(text, 0).unwrap().0
    }

    #[test]
    fn telephone_expression() {
        let t = compile_template(&parse("(NP (DT the) (NN telephone))"));
        assert_eq!(t.expression(), "/N* << (/D* $ /N*)");
        assert_eq!(compile_template(&parse("(NN telephone)")).expression(), "/N*");
        assert_eq!(compile_template(&parse("(NP (NNP Bob))")).expression(), "/N* << /N*");
    }

    #[test]
    fn matches_its_own_source() {
        for src in ["(NP (DT the) (NN telephone))", "(NN telephone)", "(VP (VBD ran) (ADVP (RB away)))"] {
            let tree = parse(src);
            assert!(compile_template(&tree).match_at(&tree).is_some(), "{src}");
        }
    }

    #[test]
    fn sea_route_chunk() {
        let t = compile_template(&parse("(NP (DT the) (NN telephone))"));
        let cand = parse("(NP (NP (DT the) (NN sea) (NN route)) (PP (TO to) (NP (NNP India))))");
        let m = t.find(&cand).unwrap();
        assert_eq!(m.chunk, vec![0, 1, 2]);
        assert_eq!(m.root_span, (0, 4));
        assert_eq!(m.leaf_pairs, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn verb_phrase_does_not_match_noun_template() {
        let t = compile_template(&parse("(NP (DT the) (NN telephone))"));
        assert!(t.find(&parse("(VP (VBD ran) (ADVP (RB away)))")).is_none());
    }

    #[test]
    fn extra_adjective_between_sisters() {
        let t = compile_template(&parse("(NP (DT the) (NN telephone))"));
        let m = t.find(&parse("(NP (DT the) (JJ old) (NN bridge))")).unwrap();
        assert_eq!(m.chunk, vec![0, 1, 2]);
        assert_eq!(m.leaf_pairs, vec![(0, 0), (1, 2)]);
    }
}
