use std::fmt;

use super::vector::BitVector;
use crate::error::{Error, Result};

/// A dense `rows x cols` matrix over GF(2), stored row-major as packed rows.
///
/// Read as a sequence, the columns are the elements; read as a code, the
/// matrix is a parity-check matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Reduces `rows` to reduced row-echelon form in place, pivoting only on the
/// first `pivot_cols` columns. Returns the pivot column of each leading row.
pub(crate) fn rref(rows: &mut [BitVector], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                *row ^= &pivot;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl BitMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from its rows. An empty list yields a `0 x cols` matrix.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.dim(),
            });
        }
        Ok(Self { cols, rows })
    }

    /// Builds a `rows x columns.len()` matrix whose columns are `columns`.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.dim() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.dim(),
                });
            }
            for r in col.ones_iter() {
                m.rows[r].set(c, true);
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.rows[r].set(c, true);
                }
            }
        }
        m
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[must_use]
    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVector> {
        self.rows.iter()
    }

    #[must_use]
    pub fn column(&self, c: usize) -> BitVector {
        assert!(c < self.cols, "column {c} out of range ({} columns)", self.cols);
        let mut v = BitVector::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    #[must_use]
    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    /// Sum of the listed columns (indices may not repeat meaningfully: a
    /// repeated index cancels).
    #[must_use]
    pub fn column_sum(&self, indices: &[usize]) -> BitVector {
        let mut v = BitVector::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let bit = indices.iter().filter(|&&c| row.get(c)).count() % 2 == 1;
            if bit {
                v.set(r, true);
            }
        }
        v
    }

    /// Returns a copy with entry `(r, c)` set to `value`.
    #[must_use]
    pub fn with_entry(&self, r: usize, c: usize, value: bool) -> Self {
        let mut m = self.clone();
        m.rows[r].set(c, value);
        m
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        rref(&mut rows, self.cols).len()
    }

    /// `M * x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.dim(),
            });
        }
        let mut out = BitVector::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Solves `M * x = target`. Free variables are fixed to zero, so the
    /// answer is deterministic. Returns `None` if the system is inconsistent.
    pub fn solve(&self, target: &BitVector) -> Result<Option<BitVector>> {
        if target.dim() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: target.dim(),
            });
        }
        let mut aug: Vec<BitVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| row.extended(target.get(r)))
            .collect();
        let pivots = rref(&mut aug, self.cols);
        if aug[pivots.len()..].iter().any(|row| row.get(self.cols)) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if aug[r].get(self.cols) {
                x.set(c, true);
            }
        }
        Ok(Some(x))
    }

    /// A basis of `{x : M * x = 0}`, one vector per free column, in column order.
    #[must_use]
    pub fn nullspace_basis(&self) -> Vec<BitVector> {
        let mut rows = self.rows.clone();
        let pivots = rref(&mut rows, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVector::unit(self.cols, f);
                for (r, &c) in pivots.iter().enumerate() {
                    if rows[r].get(f) {
                        x.set(c, true);
                    }
                }
                x
            })
            .collect()
    }

    /// A basis of the row space (the nonzero rows of the reduced form).
    #[must_use]
    pub fn row_space_basis(&self) -> Vec<BitVector> {
        let mut rows = self.rows.clone();
        let rank = rref(&mut rows, self.cols).len();
        rows.truncate(rank);
        rows
    }

    #[must_use]
    pub fn transpose(&self) -> Self {
        Self {
            cols: self.rows.len(),
            rows: self.columns(),
        }
    }

    #[must_use]
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        Self {
            cols: indices.len(),
            rows: self
                .rows
                .iter()
                .map(|row| BitVector::from_bits(&indices.iter().map(|&c| row.get(c)).collect::<Vec<_>>()))
                .collect(),
        }
    }

    #[must_use]
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            cols: self.cols,
            rows: indices.iter().map(|&r| self.rows[r].clone()).collect(),
        }
    }

    /// Appends one column at the right.
    pub fn with_column(&self, column: &BitVector) -> Result<Self> {
        if column.dim() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: column.dim(),
            });
        }
        Ok(Self {
            cols: self.cols + 1,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(r, row)| row.extended(column.get(r)))
                .collect(),
        })
    }

    // In-place elementary operations; only reachable through `OpLog` replay
    // and the crate's own reductions.

    pub(crate) fn swap_columns_mut(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.rows {
            let (a, b) = (row.get(i), row.get(j));
            if a != b {
                row.flip(i);
                row.flip(j);
            }
        }
    }

    pub(crate) fn add_row_mut(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst, "a row cannot be added to itself");
        let s = self.rows[src].clone();
        self.rows[dst] ^= &s;
    }

    pub(crate) fn swap_rows_mut(&mut self, i: usize, j: usize) {
        self.rows.swap(i, j);
    }

    pub(crate) fn add_vector_to_columns_mut(&mut self, v: &BitVector) {
        assert_eq!(v.dim(), self.rows.len(), "translation vector has wrong dimension");
        for r in v.ones_iter() {
            self.rows[r] = &self.rows[r] ^ &BitVector::ones(self.cols);
        }
    }

    pub(crate) fn flip_row_off_diagonal_mut(&mut self, i: usize) {
        assert_eq!(self.rows.len(), self.cols, "switching needs a square matrix");
        let keep = self.rows[i].get(i);
        self.rows[i] = &self.rows[i] ^ &BitVector::ones(self.cols);
        self.rows[i].set(i, keep);
    }

    pub(crate) fn remove_row(&self, r: usize) -> Self {
        let mut m = self.clone();
        m.rows.remove(r);
        m
    }

    /// Parses the text format: a `rows cols` header, then `rows` lines of
    /// `cols` characters from `{0, 1}`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("bad header {header:?}: {e}"))))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!("header {header:?} must be \"rows cols\"")));
        };
        let mut out = Vec::with_capacity(rows);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {r} of {rows}")))?;
            let v = BitVector::parse(line)?;
            if v.dim() != cols {
                return Err(Error::Parse(format!("row {r} has {} entries, expected {cols}", v.dim())));
            }
            out.push(v);
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("trailing content after {rows} rows")));
        }
        Ok(Self { cols, rows: out })
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows.len(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{row}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        let cols = rows[0].len();
        BitMatrix::from_rows(cols, rows.iter().map(|r| BitVector::parse(r).unwrap()).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(m(&["1011", "1011"]).rank(), 1);
        // 1110 + 0111 = 1001, so the third row is dependent.
        assert_eq!(m(&["1110", "0111", "1001"]).rank(), 2);
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn solve_examples() {
        let t = BitVector::parse("101").unwrap();
        assert_eq!(BitMatrix::identity(3).solve(&t).unwrap(), Some(t.clone()));
        let x = m(&["11"]).solve(&BitVector::parse("1").unwrap()).unwrap();
        assert_eq!(x.unwrap().to_string(), "10");
        let inconsistent = m(&["10", "00"]).solve(&BitVector::parse("01").unwrap()).unwrap();
        assert_eq!(inconsistent, None);
        assert!(m(&["10"]).solve(&t).is_err());
    }

    #[test]
    fn nullspace_examples() {
        assert!(BitMatrix::identity(4).nullspace_basis().is_empty());
        let basis = m(&["111"]).nullspace_basis();
        assert_eq!(basis.len(), 2);
        assert!(basis.iter().all(|v| v.weight() % 2 == 0 && !v.is_zero()));
        assert_eq!(BitMatrix::zeros(2, 3).nullspace_basis().len(), 3);
    }

    #[test]
    fn text_format_round_trip() {
        let a = m(&["1100", "0011", "1010"]);
        let text = a.to_string();
        assert_eq!(text, "3 4\n1100\n0011\n1010\n");
        assert_eq!(BitMatrix::parse(&text).unwrap(), a);
        assert!(BitMatrix::parse("2 3\n101\n").is_err());
        assert!(BitMatrix::parse("1 3\n1012\n").is_err());
        assert!(BitMatrix::parse("1 3\n10\n").is_err());
    }

    #[test]
    fn column_and_row_views_agree() {
        let a = m(&["1100", "0110", "1011"]);
        for c in 0..4 {
            let col = a.column(c);
            for r in 0..3 {
                assert_eq!(col.get(r), a.row(r).get(c));
            }
        }
        assert_eq!(BitMatrix::from_columns(3, &a.columns()).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn wide_matrices_work() {
        let a = BitMatrix::from_fn(64, 4096, |r, c| (r * 7 + c * 13) % 5 == 0);
        assert!(a.rank() <= 64);
        let x = BitVector::unit(4096, 4095);
        assert_eq!(a.mul_vec(&x).unwrap(), a.column(4095));
    }
}
