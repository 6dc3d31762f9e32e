//! Exhaustive enumerators for the combinatorial interpretations of the
//! poly-Bernoulli numbers. These are ground truth for [`crate::exact`]
//! and deliberately share nothing with it.

use crate::count::Count;
use crate::error::{Error, Result};

/// Largest `n * k` the matrix enumerators will walk (2^24 masks).
pub const MAX_CELLS: usize = 24;
/// Largest `n * k` for the orientation enumerator (2^24 orientations).
pub const MAX_EDGES: usize = 24;
/// Largest `n + k` for the Vesztergombi permutation enumerator.
pub const MAX_VESZTERGOMBI: usize = 10;
/// Largest `r + s` for the excedance-word enumerator.
pub const MAX_EXCEDANCE: usize = 10;

/// An `n x k` zero-one matrix packed row-major: entry `(i, j)` is bit `i*k + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    k: usize,
    bits: u32,
}

impl BitMatrix {
    pub fn new(n: usize, k: usize, bits: u32) -> Result<Self> {
        let cells = n * k;
        if cells > MAX_CELLS {
            return Err(Error::guard("matrix cells", cells, MAX_CELLS));
        }
        let mask = (1u32 << cells) - 1;
        Ok(BitMatrix {
            n,
            k,
            bits: bits & mask,
        })
    }

    /// Build from rows of 0/1 entries.
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, |r| r.len());
        let mut bits = 0u32;
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), k, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    bits |= 1 << (i * k + j);
                }
            }
        }
        Self::new(n, k, bits)
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits >> (i * self.k + j) & 1 == 1
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut bits = 0u32;
        for i in 0..self.n {
            for j in 0..self.k {
                if self.get(i, j) {
                    bits |= 1 << (j * self.n + i);
                }
            }
        }
        BitMatrix {
            n: self.k,
            k: self.n,
            bits,
        }
    }

    fn has_zero_row(&self) -> bool {
        (0..self.n).any(|i| (0..self.k).all(|j| !self.get(i, j)))
    }

    fn has_zero_col(&self) -> bool {
        (0..self.k).any(|j| (0..self.n).all(|i| !self.get(i, j)))
    }

    /// Calls `f(top_left, top_right, bottom_left, bottom_right)` for every
    /// 2x2 submatrix; stops at the first `true`.
    fn any_minor(&self, f: impl Fn(bool, bool, bool, bool) -> bool) -> bool {
        for i in 0..self.n {
            for i2 in i + 1..self.n {
                for j in 0..self.k {
                    for j2 in j + 1..self.k {
                        if f(
                            self.get(i, j),
                            self.get(i, j2),
                            self.get(i2, j),
                            self.get(i2, j2),
                        ) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

/// No 2x2 submatrix equal to `[1 0; 0 1]` or `[0 1; 1 0]`.
pub fn is_lonesum(m: &BitMatrix) -> bool {
    !m.any_minor(|a, b, c, d| a == d && b == c && a != b)
}

/// No 2x2 submatrix equal to `[1 1; 1 0]` or `[1 1; 1 1]`.
pub fn is_gamma_free(m: &BitMatrix) -> bool {
    !m.any_minor(|a, b, c, _| a && b && c)
}

fn count_matrices(n: usize, k: usize, keep: impl Fn(&BitMatrix) -> bool) -> Result<Count> {
    let cells = n * k;
    if cells > MAX_CELLS {
        return Err(Error::guard("matrix cells", cells, MAX_CELLS));
    }
    let total = 1u64 << cells;
    let hits = (0..total)
        .filter(|&bits| {
            keep(&BitMatrix {
                n,
                k,
                bits: bits as u32,
            })
        })
        .count();
    Ok(Count::from(hits as u64))
}

pub fn count_lonesum(n: usize, k: usize) -> Result<Count> {
    count_matrices(n, k, is_lonesum)
}

/// Lonesum matrices, optionally excluding those with an all-zero row and/or column.
pub fn count_lonesum_restricted(
    n: usize,
    k: usize,
    forbid_zero_rows: bool,
    forbid_zero_cols: bool,
) -> Result<Count> {
    count_matrices(n, k, |m| {
        !(forbid_zero_rows && m.has_zero_row())
            && !(forbid_zero_cols && m.has_zero_col())
            && is_lonesum(m)
    })
}

pub fn count_gamma_free(n: usize, k: usize) -> Result<Count> {
    count_matrices(n, k, is_gamma_free)
}

/// Does the orientation of `K(n,k)` encoded by `bits` contain a directed cycle?
///
/// Bit `i*k + j` set means the edge runs from row vertex `i` to column
/// vertex `n + j`; clear means the reverse. Iterative three-colour DFS.
fn orientation_has_cycle(n: usize, k: usize, bits: u32) -> bool {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;

    let v = n + k;
    let successors = |u: usize| -> Vec<usize> {
        if u < n {
            (0..k)
                .filter(|&j| bits >> (u * k + j) & 1 == 1)
                .map(|j| n + j)
                .collect()
        } else {
            let j = u - n;
            (0..n).filter(|&i| bits >> (i * k + j) & 1 == 0).collect()
        }
    };

    let mut colour = vec![WHITE; v];
    for root in 0..v {
        if colour[root] != WHITE {
            continue;
        }
        // Stack of (vertex, its successors, next successor index).
        let mut stack = vec![(root, successors(root), 0usize)];
        colour[root] = GREY;
        while let Some((u, succ, idx)) = stack.last_mut() {
            if *idx == succ.len() {
                colour[*u] = BLACK;
                stack.pop();
                continue;
            }
            let w = succ[*idx];
            *idx += 1;
            match colour[w] {
                GREY => return true,
                WHITE => {
                    colour[w] = GREY;
                    let s = successors(w);
                    stack.push((w, s, 0));
                }
                _ => {}
            }
        }
    }
    false
}

/// Acyclic orientations of the complete bipartite graph `K(n,k)`.
pub fn count_acyclic_orientations(n: usize, k: usize) -> Result<Count> {
    let edges = n * k;
    if edges > MAX_EDGES {
        return Err(Error::guard("bipartite edges", edges, MAX_EDGES));
    }
    let hits = (0..1u32 << edges)
        .filter(|&bits| !orientation_has_cycle(n, k, bits))
        .count();
    Ok(Count::from(hits as u64))
}

/// Depth-first walk over permutations of `1..=len`; `allowed(pos, value)`
/// decides whether `value` may sit at 1-based position `pos`.
fn count_permutations(len: usize, allowed: impl Fn(usize, usize) -> bool) -> u64 {
    fn go(pos: usize, len: usize, used: u32, allowed: &impl Fn(usize, usize) -> bool) -> u64 {
        if pos > len {
            return 1;
        }
        (1..=len)
            .filter(|&v| used >> v & 1 == 0 && allowed(pos, v))
            .map(|v| go(pos + 1, len, used | 1 << v, allowed))
            .sum()
    }
    go(1, len, 0, &allowed)
}

/// Permutations of `1..=n+k` with `-k <= pi(i) - i <= n`.
pub fn count_vesztergombi(n: usize, k: usize) -> Result<Count> {
    if n + k > MAX_VESZTERGOMBI {
        return Err(Error::guard("n + k", n + k, MAX_VESZTERGOMBI));
    }
    let (n, k) = (n as i64, k as i64);
    let hits = count_permutations((n + k) as usize, |i, v| {
        let d = v as i64 - i as i64;
        -k <= d && d <= n
    });
    Ok(Count::from(hits))
}

/// `[B^{r-1} A^s]`: permutations of `1..=r+s` whose excedances are exactly
/// the positions `1..r-1` among the first `r+s-1`.
pub fn count_excedance_word(r: usize, s: usize) -> Result<Count> {
    if r == 0 {
        return Err(Error::Domain {
            what: "count_excedance_word r",
            value: 0.0,
        });
    }
    let len = r + s;
    if len > MAX_EXCEDANCE {
        return Err(Error::guard("r + s", len, MAX_EXCEDANCE));
    }
    let hits = count_permutations(len, |pos, v| {
        let excedance = v > pos;
        if pos < r {
            excedance
        } else {
            !excedance
        }
    });
    Ok(Count::from(hits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{c_relative, ml_degree, poly_bernoulli};
    use proptest::prelude::*;

    #[test]
    fn lonesum_examples() {
        let id = BitMatrix::from_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert!(!is_lonesum(&id));
        let anti = BitMatrix::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(!is_lonesum(&anti));
        let ones = BitMatrix::from_rows(&[&[1, 1], &[1, 1]]).unwrap();
        assert!(is_lonesum(&ones));
        let l = BitMatrix::from_rows(&[&[1, 1], &[1, 0]]).unwrap();
        assert!(is_lonesum(&l));
        assert!(!is_gamma_free(&l));
    }

    #[test]
    fn lonesum_counts() {
        assert_eq!(count_lonesum(2, 2).unwrap(), 14u64);
        assert_eq!(count_lonesum(0, 5).unwrap(), 1u64);
        assert_eq!(count_lonesum(2, 3).unwrap(), 46u64);
    }

    #[test]
    fn restricted_counts() {
        assert_eq!(count_lonesum_restricted(2, 2, true, true).unwrap(), 5u64);
        assert_eq!(count_lonesum_restricted(2, 2, false, true).unwrap(), 7u64);
        assert_eq!(count_lonesum_restricted(1, 1, true, true).unwrap(), 1u64);
    }

    #[test]
    fn gamma_free_counts() {
        assert_eq!(count_gamma_free(2, 2).unwrap(), 14u64);
        for k in 0..=8 {
            assert_eq!(count_gamma_free(1, k).unwrap(), 1u64 << k);
        }
        assert_eq!(count_gamma_free(2, 1).unwrap(), 4u64);
    }

    #[test]
    fn orientation_counts() {
        assert_eq!(count_acyclic_orientations(2, 2).unwrap(), 14u64);
        assert_eq!(count_acyclic_orientations(1, 1).unwrap(), 2u64);
        assert_eq!(count_acyclic_orientations(2, 3).unwrap(), 46u64);
    }

    #[test]
    fn cycle_search_finds_a_six_cycle_free_case() {
        // K(3,3) has acyclic orientations that are not "all rows above all
        // columns"; 4-cycles and 6-cycles must both be caught. B(3,3) = 230.
        assert_eq!(count_acyclic_orientations(3, 3).unwrap(), 230u64);
    }

    #[test]
    fn vesztergombi_counts() {
        assert_eq!(count_vesztergombi(1, 1).unwrap(), 2u64);
        assert_eq!(count_vesztergombi(2, 1).unwrap(), 4u64);
        assert_eq!(count_vesztergombi(2, 2).unwrap(), 14u64);
    }

    #[test]
    fn excedance_counts() {
        for s in 0..=8 {
            assert_eq!(count_excedance_word(1, s).unwrap(), 1u64);
        }
        assert_eq!(count_excedance_word(2, 1).unwrap(), 3u64);
        // Recorded from this enumerator: [B A A] = 7.
        assert_eq!(count_excedance_word(2, 2).unwrap(), 7u64);
    }

    #[test]
    fn excedance_word_counts_equal_c_relative() {
        for r in 1..=6 {
            for s in 0..=(MAX_EXCEDANCE - r).min(6) {
                assert_eq!(
                    count_excedance_word(r, s).unwrap(),
                    c_relative(r, s).unwrap(),
                    "({r},{s})"
                );
            }
        }
    }

    #[test]
    fn guards() {
        assert!(count_lonesum(5, 5).unwrap_err().is_guard());
        assert!(count_acyclic_orientations(5, 5).unwrap_err().is_guard());
        assert!(count_vesztergombi(5, 6).unwrap_err().is_guard());
        assert!(count_excedance_word(5, 6).unwrap_err().is_guard());
        assert!(count_excedance_word(0, 3).is_err());
        assert!(BitMatrix::new(5, 5, 0).unwrap_err().is_guard());
    }

    #[test]
    fn small_oracles_agree_with_formulas() {
        for n in 0..=4 {
            for k in 0..=4 {
                if n * k > 12 {
                    continue;
                }
                let b = poly_bernoulli(n, k);
                assert_eq!(count_lonesum(n, k).unwrap(), b);
                assert_eq!(count_gamma_free(n, k).unwrap(), b);
                assert_eq!(count_acyclic_orientations(n, k).unwrap(), b);
                assert_eq!(
                    count_lonesum_restricted(n, k, true, true).unwrap(),
                    ml_degree(n, k)
                );
                assert_eq!(
                    count_lonesum_restricted(n, k, false, true).unwrap(),
                    c_relative(n, k).unwrap()
                );
            }
        }
    }

    proptest! {
        #[test]
        fn lonesum_invariant_under_transpose(n in 0usize..5, k in 0usize..5, bits in any::<u32>()) {
            prop_assume!(n * k <= MAX_CELLS);
            let m = BitMatrix::new(n, k, bits).unwrap();
            let t = m.transpose();
            prop_assert_eq!(t.rows(), k);
            prop_assert_eq!(is_lonesum(&m), is_lonesum(&t));
            prop_assert_eq!(t.transpose(), m);
        }
    }
}
