//! Constituency subtree matching: strict (positional) and subtree search.

use crate::annotation::{ConstituencyNode, Token};
use crate::similarity::Equivalence;

/// Token pairs (pattern sentence index, candidate sentence index).
pub type TokenMap = Vec<(usize, usize)>;

/// Strict tree matching: internal nodes need equal labels and child counts,
/// leaves need equal tags and equivalent tokens; children are compared in
/// order. Returns the leaf alignment.
pub fn match_trees_strict(
    t1: &ConstituencyNode,
    tokens1: &[Token],
    t2: &ConstituencyNode,
    tokens2: &[Token],
    eq: &Equivalence,
) -> Option<TokenMap> {
    let mut out = Vec::new();
    strict_into(t1, tokens1, t2, tokens2, eq, &mut out).then_some(out)
}

fn strict_into(
    n1: &ConstituencyNode,
    tokens1: &[Token],
    n2: &ConstituencyNode,
    tokens2: &[Token],
    eq: &Equivalence,
    out: &mut TokenMap,
) -> bool {
    if n1.label != n2.label || n1.children.len() != n2.children.len() {
        return false;
    }
    match (n1.token_index, n2.token_index) {
        (Some(i), Some(j)) => {
            if eq.score(&tokens1[i], &tokens2[j]) <= 0.0 {
                return false;
            }
            out.push((i, j));
            true
        }
        (None, None) => n1
            .children
            .iter()
            .zip(&n2.children)
            .all(|(c1, c2)| strict_into(c1, tokens1, c2, tokens2, eq, out)),
        _ => false,
    }
}

/// First strict match of `pattern` against `candidate` or one of its
/// descendants, in pre-order.
pub fn match_subtree(
    pattern: &ConstituencyNode,
    tokens1: &[Token],
    candidate: &ConstituencyNode,
    tokens2: &[Token],
    eq: &Equivalence,
) -> Option<TokenMap> {
    candidate
        .preorder()
        .into_iter()
        .find_map(|c| match_trees_strict(pattern, tokens1, c, tokens2, eq))
}

/// Strict forest matching: same number of trees, matched positionally.
pub fn match_forest_strict(
    pattern: &[ConstituencyNode],
    tokens1: &[Token],
    candidate: &[ConstituencyNode],
    tokens2: &[Token],
    eq: &Equivalence,
) -> Option<TokenMap> {
    if pattern.len() != candidate.len() {
        return None;
    }
    let mut out = Vec::new();
    for (p, c) in pattern.iter().zip(candidate) {
        out.extend(match_trees_strict(p, tokens1, c, tokens2, eq)?);
    }
    Some(out)
}

/// Every node under (and including) the candidate forest roots, pre-order.
pub fn forest_nodes(forest: &[ConstituencyNode]) -> Vec<&ConstituencyNode> {
    forest.iter().flat_map(|t| t.preorder()).collect()
}

fn overlaps(a: &ConstituencyNode, b: &ConstituencyNode) -> bool {
    match (a.span(), b.span()) {
        (Some((a0, a1)), Some((b0, b1))) => a0 <= b1 && b0 <= a1,
        _ => false,
    }
}

/// Assigns each pattern item a distinct, non-overlapping candidate node
/// accepted by `accept`, trying candidates in pre-order and backtracking.
/// Returns the chosen node and the accept payload per pattern item.
pub fn assign_disjoint<'c, P, T>(
    pattern: &[P],
    candidates: &[&'c ConstituencyNode],
    accept: impl Fn(&P, &ConstituencyNode) -> Option<T>,
) -> Option<Vec<(&'c ConstituencyNode, T)>> {
    fn go<'c, P, T>(
        k: usize,
        pattern: &[P],
        candidates: &[&'c ConstituencyNode],
        accept: &dyn Fn(&P, &ConstituencyNode) -> Option<T>,
        chosen: &mut Vec<(&'c ConstituencyNode, T)>,
    ) -> bool {
        if k == pattern.len() {
            return true;
        }
        for &c in candidates {
            if chosen.iter().any(|(n, _)| overlaps(n, c)) {
                continue;
            }
            if let Some(payload) = accept(&pattern[k], c) {
                chosen.push((c, payload));
                if go(k + 1, pattern, candidates, accept, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    go(0, pattern, candidates, &accept, &mut chosen).then_some(chosen)
}

/// Subtree forest matching: each pattern tree strictly matches some distinct
/// node inside the candidate forest.
pub fn match_forest_subtree(
    pattern: &[ConstituencyNode],
    tokens1: &[Token],
    candidate: &[ConstituencyNode],
    tokens2: &[Token],
    eq: &Equivalence,
) -> Option<(TokenMap, Vec<usize>)> {
    let nodes = forest_nodes(candidate);
    let chosen = assign_disjoint(pattern, &nodes, |p, c| match_trees_strict(p, tokens1, c, tokens2, eq))?;
    let mut map = Vec::new();
    let mut chunk = Vec::new();
    for (node, m) in chosen {
        chunk.extend(node.leaves());
        map.extend(m);
    }
    chunk.sort_unstable();
    Some((map, chunk))
}
