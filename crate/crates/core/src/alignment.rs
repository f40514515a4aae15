//! Token alignment between a question/answer pair and its support sentence.
//!
//! The best alignment is an assignment problem: every content token of Q/A
//! maps to at most one sentence token and vice versa, maximizing the summed
//! equivalence scores. It is solved as a minimization over `max − M_ij`.

use serde::{Deserialize, Serialize};

use crate::annotation::{is_wh_word, AnnotatedSentence, Token};
use crate::resources::Stopwords;
use crate::similarity::Equivalence;

const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    /// Q/A token index of each row.
    pub rows: Vec<usize>,
    /// Sentence token index of each column.
    pub cols: Vec<usize>,
    pub cells: Vec<Vec<f64>>,
}

impl ScoreMatrix {
    /// Matrix over positional rows/columns, mostly for tests.
    pub fn from_cells(cells: Vec<Vec<f64>>) -> Self {
        let n_cols = cells.first().map_or(0, Vec::len);
        ScoreMatrix {
            rows: (0..cells.len()).collect(),
            cols: (0..n_cols).collect(),
            cells,
        }
    }

    pub fn get(&self, qa_index: usize, s_index: usize) -> Option<f64> {
        let r = self.rows.iter().position(|&x| x == qa_index)?;
        let c = self.cols.iter().position(|&x| x == s_index)?;
        Some(self.cells[r][c])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignedPair {
    pub qa: usize,
    pub s: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Alignment {
    /// Sorted by `qa`.
    pub pairs: Vec<AlignedPair>,
    pub total: f64,
}

impl Alignment {
    pub fn sentence_index_of(&self, qa: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.qa == qa).map(|p| p.s)
    }

    pub fn qa_index_of(&self, s: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.s == s).map(|p| p.qa)
    }

    pub fn is_injective(&self) -> bool {
        let mut qa: Vec<usize> = self.pairs.iter().map(|p| p.qa).collect();
        let mut s: Vec<usize> = self.pairs.iter().map(|p| p.s).collect();
        qa.sort_unstable();
        s.sort_unstable();
        qa.windows(2).all(|w| w[0] != w[1]) && s.windows(2).all(|w| w[0] != w[1])
    }
}

/// Scores every non-stopword Q/A token against every non-stopword sentence
/// token. Wh-words never become rows.
pub fn build_score_matrix(
    qa: &[Token],
    s: &AnnotatedSentence,
    eq: &Equivalence,
    stopwords: &Stopwords,
    wh_words: &[String],
) -> ScoreMatrix {
    let rows: Vec<usize> = qa
        .iter()
        .enumerate()
        .filter(|(_, t)| !stopwords.is_stopword(t) && !is_wh_word(&t.surface, wh_words))
        .map(|(i, _)| i)
        .collect();
    let cols: Vec<usize> = s
        .tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| !stopwords.is_stopword(t))
        .map(|(i, _)| i)
        .collect();
    let cells = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| eq.score(&qa[r], &s.tokens[c])).collect())
        .collect();
    ScoreMatrix { rows, cols, cells }
}

/// Minimum-cost perfect assignment on a square matrix (potentials method,
/// O(n³)). Returns the column assigned to each row.
pub fn hungarian_min(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays; index 0 is the virtual start column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if p[j] != 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Maximum-score assignment over a rectangular score matrix: the matrix is
/// turned into costs `max − M_ij` and padded square with phantom cost `max`.
/// Returns (row, col) pairs with positive score.
fn max_assignment(cells: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let r = cells.len();
    let c = cells.first().map_or(0, Vec::len);
    let n = r.max(c);
    if n == 0 || r == 0 || c == 0 {
        return Vec::new();
    }
    let max = cells.iter().flatten().copied().fold(0.0, f64::max);
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i < r && j < c { max - cells[i][j] } else { max })
                .collect()
        })
        .collect();
    hungarian_min(&cost)
        .into_iter()
        .enumerate()
        .filter(|&(i, j)| i < r && j < c && cells[i][j] > 0.0)
        .collect()
}

fn assignment_value(cells: &[Vec<f64>]) -> f64 {
    max_assignment(cells).iter().map(|&(i, j)| cells[i][j]).sum()
}

fn submatrix(cells: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|&i| cols.iter().map(|&j| cells[i][j]).collect())
        .collect()
}

/// Optimal positive-score assignment, ties resolved towards the
/// lexicographically smallest (row, column) sequence.
pub fn best_assignment(cells: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let n_cols = cells.first().map_or(0, Vec::len);
    let mut free_rows: Vec<usize> = (0..cells.len()).collect();
    let mut free_cols: Vec<usize> = (0..n_cols).collect();
    let mut chosen = Vec::new();
    while let Some(&row) = free_rows.first() {
        let target = assignment_value(&submatrix(cells, &free_rows, &free_cols));
        let rest_rows: Vec<usize> = free_rows[1..].to_vec();
        let mut fixed = None;
        for (k, &col) in free_cols.iter().enumerate() {
            let score = cells[row][col];
            if score <= 0.0 {
                continue;
            }
            let mut rest_cols = free_cols.clone();
            rest_cols.remove(k);
            let value = score + assignment_value(&submatrix(cells, &rest_rows, &rest_cols));
            if value >= target - TIE_TOLERANCE {
                fixed = Some(k);
                break;
            }
        }
        if let Some(k) = fixed {
            chosen.push((row, free_cols.remove(k)));
        }
        free_rows.remove(0);
    }
    chosen
}

/// Best alignment of a score matrix. Zero-score pairs are dropped.
pub fn best_alignment(m: &ScoreMatrix) -> Alignment {
    let pairs: Vec<AlignedPair> = best_assignment(&m.cells)
        .into_iter()
        .map(|(i, j)| AlignedPair {
            qa: m.rows[i],
            s: m.cols[j],
            score: m.cells[i][j],
        })
        .collect();
    let total = pairs.iter().map(|p| p.score).sum();
    Alignment { pairs, total }
}

/// Every row token is aligned to some sentence token.
pub fn alignment_complete(a: &Alignment, qa_rows: &[usize]) -> bool {
    qa_rows.iter().all(|r| a.pairs.iter().any(|p| p.qa == *r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(cells: &[Vec<f64>]) -> f64 {
        fn go(cells: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
            if row == cells.len() {
                return 0.0;
            }
            let mut best = go(cells, row + 1, used);
            for j in 0..used.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.max(cells[row][j] + go(cells, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        let c = cells.first().map_or(0, Vec::len);
        go(cells, 0, &mut vec![false; c])
    }

    #[test]
    fn identity_matrix() {
        let a = best_alignment(&ScoreMatrix::from_cells(vec![vec![1.0, 0.0], vec![0.0, 1.0]]));
        assert_eq!(a.pairs.iter().map(|p| (p.qa, p.s)).collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        assert_eq!(a.total, 2.0);
    }

    #[test]
    fn empty_matrix() {
        let a = best_alignment(&ScoreMatrix::from_cells(vec![]));
        assert!(a.pairs.is_empty());
        assert_eq!(a.total, 0.0);
        assert!(alignment_complete(&a, &[]));
    }

    #[test]
    fn rectangular_matrices() {
        let wide = vec![vec![0.2, 0.9, 0.1]];
        assert_eq!(best_assignment(&wide), vec![(0, 1)]);
        let tall = vec![vec![0.5], vec![0.7], vec![0.0]];
        assert_eq!(best_assignment(&tall), vec![(1, 0)]);
    }

    #[test]
    fn ties_prefer_lowest_pairs() {
        let cells = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(best_assignment(&cells), vec![(0, 0), (1, 1)]);
        let cells = vec![vec![0.0, 0.5, 0.5], vec![0.0, 0.0, 0.0]];
        assert_eq!(best_assignment(&cells), vec![(0, 1)]);
    }

    #[test]
    fn zero_rows_leave_alignment_incomplete() {
        let m = ScoreMatrix::from_cells(vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        let a = best_alignment(&m);
        assert!(!alignment_complete(&a, &m.rows));
        assert!(alignment_complete(&a, &[0]));
    }

    #[test]
    fn table_like_matrix_totals() {
        // created, telephone, AGB against AGB, credited, inventing, telephone.
        let cells = vec![
            vec![0.0, 0.0, 0.75, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ];
        let a = best_alignment(&ScoreMatrix::from_cells(cells));
        assert_eq!(a.total, 2.75);
        assert_eq!(a.pairs.iter().map(|p| (p.qa, p.s)).collect::<Vec<_>>(), vec![(0, 2), (1, 3), (2, 0)]);
    }

    #[test]
    fn degenerate_hungarian_handles_all_equal_costs() {
        let cost = vec![vec![3.0; 4]; 4];
        let mut a = hungarian_min(&cost);
        a.sort_unstable();
        assert_eq!(a, vec![0, 1, 2, 3]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
            (0usize..=6, 0usize..=6).prop_flat_map(|(r, c)| {
                prop::collection::vec(prop::collection::vec((0u32..=8).prop_map(|x| x as f64 / 8.0), c), r)
            })
        }

        proptest! {
            #[test]
            fn matches_brute_force(cells in matrix()) {
                let a = best_alignment(&ScoreMatrix::from_cells(cells.clone()));
                prop_assert_eq!(a.total, brute_force(&cells));
                prop_assert!(a.is_injective());
            }

            #[test]
            fn total_invariant_under_permutation(cells in matrix(), seed in any::<u64>()) {
                use rand::seq::SliceRandom;
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut permuted = cells.clone();
                permuted.shuffle(&mut rng);
                let c = cells.first().map_or(0, Vec::len);
                let mut perm: Vec<usize> = (0..c).collect();
                perm.shuffle(&mut rng);
                let permuted: Vec<Vec<f64>> = permuted.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect();
                let a = best_alignment(&ScoreMatrix::from_cells(cells));
                let b = best_alignment(&ScoreMatrix::from_cells(permuted));
                prop_assert_eq!(a.total, b.total);
            }
        }
    }
}
