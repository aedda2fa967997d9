use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, ElementaryOp, OpLog};

/// A `k x n` matrix whose first `2k` columns come in pairs: columns `2i` and
/// `2i + 1` differ in row `i` and agree in every other row.
///
/// The log maps the source matrix onto `matrix`, so column indices found
/// here can be pulled back to the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinormalMatrix {
    matrix: BitMatrix,
    k: usize,
    log: OpLog,
}

impl BinormalMatrix {
    /// Wraps a matrix that is already in binormal form, with an empty log.
    pub fn new(matrix: BitMatrix) -> Result<Self> {
        let k = matrix.rows();
        validate_binormal(&matrix, k)?;
        Ok(Self {
            matrix,
            k,
            log: OpLog::new(),
        })
    }

    #[must_use]
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    #[must_use]
    pub fn k(&self) -> usize {
        self.k
    }

    #[must_use]
    pub fn log(&self) -> &OpLog {
        &self.log
    }

    /// Maps column indices of `matrix` back to the source matrix.
    #[must_use]
    pub fn pull_back(&self, indices: &[usize]) -> Vec<usize> {
        self.log.pull_back(self.matrix.cols(), indices)
    }
}

/// Checks the pair structure on the first `k` rows and `2k` columns.
pub fn validate_binormal(m: &BitMatrix, k: usize) -> Result<()> {
    if m.rows() < k || m.cols() < 2 * k {
        return Err(Error::Precondition(format!(
            "a {}x{} matrix cannot hold {k} column pairs",
            m.rows(),
            m.cols()
        )));
    }
    for j in 0..k {
        for i in 0..k {
            let differ = m.get(i, 2 * j) != m.get(i, 2 * j + 1);
            if differ != (i == j) {
                return Err(Error::Validation(format!(
                    "columns {} and {} {} in row {i}",
                    2 * j,
                    2 * j + 1,
                    if differ { "differ" } else { "agree" }
                )));
            }
        }
    }
    Ok(())
}

#[must_use]
pub fn is_binormal(m: &BitMatrix, k: usize) -> bool {
    validate_binormal(m, k).is_ok()
}

/// Picks one column from each pair so the picked columns sum to `x`.
///
/// The choice is unique; indices refer to `b.matrix()`.
pub fn binormal_select(b: &BinormalMatrix, x: &BitVector) -> Result<Vec<usize>> {
    if x.dim() != b.k {
        return Err(Error::DimensionMismatch {
            expected: b.k,
            found: x.dim(),
        });
    }
    Ok(select_prefix(&b.matrix, b.k, x))
}

/// The selector on the leading `p` rows and `p` pairs of a matrix whose
/// `p x 2p` corner is binormal. `target` is read on its first `p`
/// coordinates.
pub(crate) fn select_prefix(m: &BitMatrix, p: usize, target: &BitVector) -> Vec<usize> {
    let mut sum = BitVector::zeros(p);
    for i in 0..p {
        for r in 0..p {
            if m.get(r, 2 * i) {
                sum.flip(r);
            }
        }
    }
    // Switching pair i to its other column toggles row i and nothing else.
    (0..p).map(|i| if sum.get(i) == target.get(i) { 2 * i } else { 2 * i + 1 }).collect()
}

/// Brings a `k x n` matrix to binormal form using column swaps and row
/// additions only.
///
/// Requires `n` odd, `2k < n`, rank `k` and every row summing to zero.
pub fn to_binormal_form(m: &BitMatrix) -> Result<BinormalMatrix> {
    let (k, n) = (m.rows(), m.cols());
    if n % 2 == 0 {
        return Err(Error::Precondition(format!("column count {n} is even")));
    }
    if 2 * k >= n {
        return Err(Error::Precondition(format!("{k} rows need more than {} columns", 2 * k)));
    }
    let rank = m.rank();
    if rank != k {
        return Err(Error::RankDeficient { rank, rows: k });
    }
    if let Some(r) = (0..k).find(|&r| m.row(r).weight() % 2 == 1) {
        return Err(Error::Precondition(format!("row {r} sums to 1")));
    }

    let pairs = independent_pairs(m)?;
    let mut work = m.clone();
    let mut log = OpLog::new();

    // Row additions turn the pair differences into the unit vectors.
    for (i, &(p, q)) in pairs.iter().enumerate() {
        let diff = &work.column(p) ^ &work.column(q);
        if !diff.get(i) {
            let r = (i + 1..k)
                .find(|&r| diff.get(r))
                .ok_or_else(|| Error::Validation("pair differences became dependent".into()))?;
            log.record(&mut work, ElementaryOp::AddRow { src: r, dst: i });
        }
        let diff = &work.column(p) ^ &work.column(q);
        for r in (0..k).filter(|&r| r != i && diff.get(r)) {
            log.record(&mut work, ElementaryOp::AddRow { src: i, dst: r });
        }
    }

    let mut order: Vec<usize> = pairs.iter().flat_map(|&(p, q)| [p, q]).collect();
    let mut used = vec![false; n];
    for &c in &order {
        used[c] = true;
    }
    order.extend((0..n).filter(|&c| !used[c]));
    let mut at: Vec<usize> = (0..n).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    for (target, &c) in order.iter().enumerate() {
        let cur = pos[c];
        if cur != target {
            log.record(&mut work, ElementaryOp::SwapColumns(cur, target));
            let other = at[target];
            at.swap(cur, target);
            pos[c] = target;
            pos[other] = cur;
        }
    }

    validate_binormal(&work, k)?;
    Ok(BinormalMatrix {
        matrix: work,
        k,
        log,
    })
}

fn independent(diffs: &[BitVector], rows: usize) -> bool {
    diffs.is_empty() || BitMatrix::from_columns(rows, diffs).is_ok_and(|d| d.rank() == diffs.len())
}

/// Finds `k` disjoint column pairs whose differences are linearly
/// independent.
///
/// Pairs are added greedily. When every unused column lies in one coset of
/// the current span, some used pair lies in another coset, and re-pairing it
/// with two unused columns grows the family by one.
fn independent_pairs(m: &BitMatrix) -> Result<Vec<(usize, usize)>> {
    let (k, n) = (m.rows(), m.cols());
    let cols = m.columns();
    let diff = |a: usize, b: usize| &cols[a] ^ &cols[b];
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(k);
    let mut used = vec![false; n];

    while pairs.len() < k {
        let diffs: Vec<BitVector> = pairs.iter().map(|&(p, q)| diff(p, q)).collect();
        let unused: Vec<usize> = (0..n).filter(|&c| !used[c]).collect();
        let mut grown = None;
        'greedy: for (ai, &a) in unused.iter().enumerate() {
            for &b in &unused[ai + 1..] {
                let mut trial = diffs.clone();
                trial.push(diff(a, b));
                if independent(&trial, k) {
                    grown = Some((a, b));
                    break 'greedy;
                }
            }
        }
        if let Some((a, b)) = grown {
            pairs.push((a, b));
            used[a] = true;
            used[b] = true;
            continue;
        }

        let mut repaired = None;
        'repair: for j in 0..pairs.len() {
            let rest: Vec<BitVector> = (0..pairs.len()).filter(|&i| i != j).map(|i| diffs[i].clone()).collect();
            let (p0, q0) = pairs[j];
            for (p, q) in [(p0, q0), (q0, p0)] {
                for &u in &unused {
                    for &v in unused.iter().filter(|&&v| v != u) {
                        let mut trial = rest.clone();
                        trial.push(diff(p, u));
                        trial.push(diff(q, v));
                        if independent(&trial, k) {
                            repaired = Some((j, (p, u), (q, v)));
                            break 'repair;
                        }
                    }
                }
            }
        }
        let (j, first, second) =
            repaired.ok_or_else(|| Error::Validation("no independent column pairing found".into()))?;
        pairs[j] = first;
        pairs.push(second);
        used[first.1] = true;
        used[second.1] = true;
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BitMatrix {
        let rows: Vec<BitVector> = rows.iter().map(|r| BitVector::parse(r).unwrap()).collect();
        BitMatrix::from_rows(rows[0].dim(), rows).unwrap()
    }

    #[test]
    fn single_row_is_rearranged() {
        let b = to_binormal_form(&mat(&["110"])).unwrap();
        assert_eq!(b.matrix(), &mat(&["101"]));
        assert_eq!(b.log().replay(&mat(&["110"])), *b.matrix());
    }

    #[test]
    fn two_rows_of_five() {
        let m = mat(&["11000", "00110"]);
        let b = to_binormal_form(&m).unwrap();
        assert!(is_binormal(b.matrix(), 2));
        assert_eq!(b.log().replay(&m), *b.matrix());
        assert!(b.log().ops().iter().all(|op| matches!(
            op,
            ElementaryOp::SwapColumns(..) | ElementaryOp::AddRow { .. }
        )));
        // Exactly one of the four pair choices sums to zero.
        let sel = binormal_select(&b, &BitVector::zeros(2)).unwrap();
        assert!(b.matrix().column_sum(&sel).is_zero());
        let hits = (0..4)
            .filter(|mask| {
                let pick: Vec<usize> = (0..2).map(|i| 2 * i + (mask >> i & 1)).collect();
                b.matrix().column_sum(&pick).is_zero()
            })
            .count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn preconditions_are_reported() {
        assert!(matches!(to_binormal_form(&mat(&["1100"])), Err(Error::Precondition(msg)) if msg.contains("even")));
        assert!(matches!(
            to_binormal_form(&mat(&["11000", "11000"])),
            Err(Error::RankDeficient { rank: 1, rows: 2 })
        ));
        assert!(matches!(to_binormal_form(&mat(&["100"])), Err(Error::Precondition(msg)) if msg.contains("sums")));
        assert!(to_binormal_form(&mat(&["110", "011"])).is_err());
    }

    #[test]
    fn select_on_a_single_pair() {
        let b = BinormalMatrix::new(mat(&["01"])).unwrap();
        assert_eq!(binormal_select(&b, &BitVector::parse("0").unwrap()).unwrap(), vec![0]);
        assert_eq!(binormal_select(&b, &BitVector::parse("1").unwrap()).unwrap(), vec![1]);
        assert!(binormal_select(&b, &BitVector::zeros(2)).is_err());
    }

    #[test]
    fn base_choice_is_returned_for_its_own_sum() {
        let m = mat(&["10110", "11010"]);
        let b = BinormalMatrix::new(m.select_columns(&[0, 1, 2, 3])).unwrap();
        let x = b.matrix().column_sum(&[0, 2]);
        assert_eq!(binormal_select(&b, &x).unwrap(), vec![0, 2]);
    }

    #[test]
    fn validator_rejects_broken_pairs() {
        assert!(validate_binormal(&mat(&["1011", "0110"]), 2).is_err());
        assert!(validate_binormal(&mat(&["1000", "0010"]), 2).is_ok());
        assert!(validate_binormal(&mat(&["10"]), 2).is_err());
    }
}
