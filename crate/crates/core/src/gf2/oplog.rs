use super::matrix::BitMatrix;
use super::vector::BitVector;

/// One invertible elementary transformation of a matrix.
///
/// None of these change whether some set of an even number of columns sums
/// to zero. Column swaps are the only operations that rename columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryOp {
    SwapColumns(usize, usize),
    AddRow { src: usize, dst: usize },
    SwapRows(usize, usize),
    /// Adds the same vector to every column.
    AddVectorToColumns(BitVector),
    /// Complements every off-diagonal entry of one row of a square matrix.
    FlipRowOffDiagonal(usize),
}

impl ElementaryOp {
    fn apply_mut(&self, m: &mut BitMatrix) {
        match self {
            Self::SwapColumns(i, j) => m.swap_columns_mut(*i, *j),
            Self::AddRow { src, dst } => m.add_row_mut(*src, *dst),
            Self::SwapRows(i, j) => m.swap_rows_mut(*i, *j),
            Self::AddVectorToColumns(v) => m.add_vector_to_columns_mut(v),
            Self::FlipRowOffDiagonal(i) => m.flip_row_off_diagonal_mut(*i),
        }
    }
}

/// An ordered record of elementary operations.
///
/// Every operation is an involution, so the inverse log is the same list
/// reversed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpLog {
    ops: Vec<ElementaryOp>,
}

impl OpLog {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, op: ElementaryOp) {
        self.ops.push(op);
    }

    /// Applies `op` to `m` and records it.
    pub(crate) fn record(&mut self, m: &mut BitMatrix, op: ElementaryOp) {
        op.apply_mut(m);
        self.ops.push(op);
    }

    pub fn extend(&mut self, other: &OpLog) {
        self.ops.extend(other.ops.iter().cloned());
    }

    #[must_use]
    pub fn ops(&self) -> &[ElementaryOp] {
        &self.ops
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    #[must_use]
    pub fn replay(&self, m: &BitMatrix) -> BitMatrix {
        let mut out = m.clone();
        for op in &self.ops {
            op.apply_mut(&mut out);
        }
        out
    }

    #[must_use]
    pub fn inverse(&self) -> OpLog {
        OpLog {
            ops: self.ops.iter().rev().cloned().collect(),
        }
    }

    /// For a matrix with `cols` columns, `origin[j]` is the original column
    /// that ends up at position `j` after the log is replayed.
    #[must_use]
    pub fn column_origin(&self, cols: usize) -> Vec<usize> {
        let mut origin: Vec<usize> = (0..cols).collect();
        for op in &self.ops {
            if let ElementaryOp::SwapColumns(i, j) = op {
                origin.swap(*i, *j);
            }
        }
        origin
    }

    /// Maps column indices of the transformed matrix back to the original
    /// matrix. The result is sorted.
    #[must_use]
    pub fn pull_back(&self, cols: usize, indices: &[usize]) -> Vec<usize> {
        let origin = self.column_origin(cols);
        let mut out: Vec<usize> = indices.iter().map(|&j| origin[j]).collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_then_inverse_restores() {
        let m = BitMatrix::from_fn(3, 3, |r, c| (r + 2 * c) % 3 == 1);
        let mut log = OpLog::new();
        log.push(ElementaryOp::SwapColumns(0, 2));
        log.push(ElementaryOp::AddRow { src: 1, dst: 0 });
        log.push(ElementaryOp::AddVectorToColumns(BitVector::parse("101").unwrap()));
        log.push(ElementaryOp::FlipRowOffDiagonal(2));
        log.push(ElementaryOp::SwapRows(0, 1));
        let t = log.replay(&m);
        assert_ne!(t, m);
        assert_eq!(log.inverse().replay(&t), m);
    }

    #[test]
    fn pull_back_follows_column_swaps() {
        let mut log = OpLog::new();
        log.push(ElementaryOp::SwapColumns(0, 3));
        log.push(ElementaryOp::SwapColumns(3, 1));
        // After both swaps: position 0 <- 3, position 1 <- 0, position 3 <- 1.
        assert_eq!(log.column_origin(4), vec![3, 0, 2, 1]);
        assert_eq!(log.pull_back(4, &[1, 3]), vec![0, 1]);
    }
}
