use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, ElementaryOp, OpLog};

use super::binormal::BinormalMatrix;

/// The shared off-diagonal values of a binormal matrix's column pairs:
/// `c[i][j]` is the entry both columns of pair `j` carry in row `i`.
///
/// Read as a digraph, `c[i][j] = 1` is an arc from `i` to `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairProfile {
    c: BitMatrix,
}

impl PairProfile {
    /// Any square matrix; the diagonal is cleared.
    pub fn from_matrix(c: &BitMatrix) -> Result<Self> {
        if c.rows() != c.cols() {
            return Err(Error::DimensionMismatch {
                expected: c.rows(),
                found: c.cols(),
            });
        }
        let n = c.rows();
        Ok(Self {
            c: BitMatrix::from_fn(n, n, |i, j| i != j && c.get(i, j)),
        })
    }

    /// Reads the profile of the first `k` pairs of `m`.
    pub(crate) fn of(m: &BitMatrix, k: usize) -> Self {
        Self {
            c: BitMatrix::from_fn(k, k, |i, j| i != j && m.get(i, 2 * j)),
        }
    }

    #[must_use]
    pub fn matrix(&self) -> &BitMatrix {
        &self.c
    }

    #[must_use]
    pub fn size(&self) -> usize {
        self.c.rows()
    }

    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.c.get(i, j)
    }

    /// Parity of the off-diagonal entries in row `i`.
    #[must_use]
    pub fn row_parity(&self, i: usize) -> bool {
        self.c.row(i).weight() % 2 == 1
    }

    /// `sigma_i(I)`: parity of row `i` restricted to `set \ {i}`.
    #[must_use]
    pub fn sigma(&self, i: usize, set: &[usize]) -> bool {
        set.iter().filter(|&&j| j != i && self.c.get(i, j)).count() % 2 == 1
    }

    /// The type of `set`: how many members have `sigma = 1`.
    #[must_use]
    pub fn type_of(&self, set: &[usize]) -> usize {
        set.iter().filter(|&&i| self.sigma(i, set)).count()
    }

    /// Complements the off-diagonal part of row `i`.
    #[must_use]
    pub fn switched(&self, i: usize) -> Self {
        let mut log = OpLog::new();
        log.push(ElementaryOp::FlipRowOffDiagonal(i));
        Self { c: log.replay(&self.c) }
    }
}

#[must_use]
pub fn profile(b: &BinormalMatrix) -> PairProfile {
    PairProfile::of(b.matrix(), b.k())
}

fn row_is_constant(c: &PairProfile, i: usize) -> bool {
    let n = c.size();
    let ones = c.matrix().row(i).weight();
    ones == 0 || ones + 1 == n
}

/// The lexicographically least `(i, j, l)` of distinct indices with
/// `c[i][j] + c[i][l] = 1` and `c[j][i] + c[j][l] = 1`.
///
/// Exists whenever no row is constant off the diagonal.
pub fn find_row_triple(c: &PairProfile) -> Result<(usize, usize, usize)> {
    let n = c.size();
    if n == 0 {
        return Err(Error::Precondition("empty profile".into()));
    }
    if let Some(i) = (0..n).find(|&i| row_is_constant(c, i)) {
        return Err(Error::Precondition(format!("row {i} is constant off the diagonal")));
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for l in (0..n).filter(|&l| l != i && l != j) {
                if c.get(i, j) != c.get(i, l) && c.get(j, i) != c.get(j, l) {
                    return Ok((i, j, l));
                }
            }
        }
    }
    Err(Error::Validation("no row triple exists".into()))
}

/// Calls `f` on the `size`-subsets of `0..n` in lexicographic order until it
/// returns true.
fn first_subset(n: usize, size: usize, mut f: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if size > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if f(&idx) {
            return Some(idx);
        }
        let Some(t) = (0..size).rev().find(|&t| idx[t] < n - size + t) else {
            return None;
        };
        idx[t] += 1;
        for u in t + 1..size {
            idx[u] = idx[u - 1] + 1;
        }
    }
}

/// A set `I` of three or five indices with `|I| = 2 t(I) - 1`: a triple of
/// type 2 or a quintuple of type 3.
///
/// Requires size `1 mod 4` and every row of odd parity. Triples are tried
/// before quintuples, each in lexicographic order.
pub fn find_type_anomaly(c: &PairProfile) -> Result<Vec<usize>> {
    let n = c.size();
    if n % 4 != 1 {
        return Err(Error::Precondition(format!("profile size {n} is not 1 mod 4")));
    }
    if let Some(i) = (0..n).find(|&i| !c.row_parity(i)) {
        return Err(Error::Precondition(format!("row {i} has even out-degree")));
    }
    for size in [3, 5] {
        if let Some(set) = first_subset(n, size, |s| 2 * c.type_of(s) == s.len() + 1) {
            return Ok(set);
        }
    }
    Err(Error::Validation("no triple of type 2 or quintuple of type 3".into()))
}
