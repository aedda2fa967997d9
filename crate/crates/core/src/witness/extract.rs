use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, ElementaryOp, OpLog};
use crate::zerosum::{dp_zero_sum_witness, GroupSequence, ZeroSumWitness};

use super::binormal::{binormal_select, select_prefix, to_binormal_form, validate_binormal};
use super::profile::{find_row_triple, find_type_anomaly, PairProfile};

/// A matrix under transformation together with the log that produced it.
struct Work {
    m: BitMatrix,
    log: OpLog,
}

impl Work {
    fn new(m: &BitMatrix) -> Self {
        Self {
            m: m.clone(),
            log: OpLog::new(),
        }
    }

    fn apply(&mut self, op: ElementaryOp) {
        self.log.record(&mut self.m, op);
    }

    /// Exchanges pairs `a` and `b` together with rows `a` and `b`, which
    /// keeps the pair structure intact.
    fn swap_pairs(&mut self, a: usize, b: usize) {
        if a != b {
            self.apply(ElementaryOp::SwapRows(a, b));
            self.apply(ElementaryOp::SwapColumns(2 * a, 2 * b));
            self.apply(ElementaryOp::SwapColumns(2 * a + 1, 2 * b + 1));
        }
    }

    /// Moves the listed pairs, in order, to the last positions among `n`.
    fn move_pairs_last(&mut self, n: usize, chosen: &[usize]) {
        let mut at: Vec<usize> = (0..n).collect();
        let mut pos: Vec<usize> = (0..n).collect();
        for (t, &c) in chosen.iter().enumerate() {
            let target = n - chosen.len() + t;
            let cur = pos[c];
            if cur != target {
                self.swap_pairs(cur, target);
                let other = at[target];
                at.swap(cur, target);
                pos[c] = target;
                pos[other] = cur;
            }
        }
    }

    fn pull_back(&self, indices: &[usize]) -> Vec<usize> {
        self.log.pull_back(self.m.cols(), indices)
    }
}

fn witness_in(m: &BitMatrix, indices: Vec<usize>, length: usize) -> Result<ZeroSumWitness> {
    let w = ZeroSumWitness::new(indices)?;
    w.validate(&GroupSequence::from_matrix_columns(m), length)?;
    Ok(w)
}

fn check_shape(m: &BitMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.rows() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: m.rows(),
        });
    }
    if m.cols() != cols {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: m.cols(),
        });
    }
    Ok(())
}

/// Picks `k` columns of a `k x n` matrix summing to zero, one from each
/// pair of its binormal form.
pub fn extract_via_enomoto(m: &BitMatrix) -> Result<ZeroSumWitness> {
    let b = to_binormal_form(m)?;
    let sel = binormal_select(&b, &BitVector::zeros(b.k()))?;
    witness_in(m, b.pull_back(&sel), b.k())
}

/// With `n` pairs, a row of even parity closes the problem: move it last and
/// select zero on the rest.
fn close_on_even_row(work: &mut Work, n: usize) -> Option<Vec<usize>> {
    let c = PairProfile::of(&work.m, n);
    let i = (0..n).find(|&i| !c.row_parity(i))?;
    work.move_pairs_last(n, &[i]);
    Some(select_prefix(&work.m, n - 1, &BitVector::zeros(n - 1)))
}

/// `n - 1` columns summing to zero from a matrix whose first `n` rows and
/// `2n + 5` columns form a binormal block with five extra columns.
fn odd_core(work: &mut Work, n: usize) -> Result<Vec<usize>> {
    if let Some(sel) = close_on_even_row(work, n) {
        return Ok(sel);
    }
    let (i, j, l) = find_row_triple(&PairProfile::of(&work.m, n))?;
    work.move_pairs_last(n, &[i, j, l]);
    let p = n - 3;
    let (r0, r1, r2) = (n - 3, n - 2, n - 1);
    let x = (0..p).filter(|&q| work.m.get(r2, 2 * q)).count() % 2 == 1;
    // Among the last nine columns, two whose rows r0, r1, r2 sum to (0, 0, x).
    let tail: Vec<usize> = (2 * p..2 * n + 3).collect();
    let special = tail
        .iter()
        .enumerate()
        .flat_map(|(ai, &a)| tail[ai + 1..].iter().map(move |&b| (a, b)))
        .find(|&(a, b)| {
            let m = &work.m;
            m.get(r0, a) == m.get(r0, b) && m.get(r1, a) == m.get(r1, b) && (m.get(r2, a) != m.get(r2, b)) == x
        })
        .ok_or_else(|| Error::Validation("no special column pair".into()))?;
    let y = work.m.column_sum(&[special.0, special.1]);
    let mut sel = select_prefix(&work.m, p, &y);
    sel.extend([special.0, special.1]);
    Ok(sel)
}

/// Picks `2m` columns with zero sum from a binormal `(2m+1) x (4m+5)`
/// matrix.
pub fn extract_odd_case(m: &BitMatrix, half: usize) -> Result<ZeroSumWitness> {
    let n = 2 * half + 1;
    check_shape(m, n, 2 * n + 3)?;
    validate_binormal(m, n)?;
    let mut work = Work::new(m);
    let sel = odd_core(&mut work, n)?;
    witness_in(m, work.pull_back(&sel), 2 * half)
}

/// `n - 1` columns summing to zero from a matrix whose first `n` rows and
/// `2n` columns are binormal, `n = 1 mod 4`.
fn even_core(work: &mut Work, n: usize) -> Result<Vec<usize>> {
    if let Some(sel) = close_on_even_row(work, n) {
        return Ok(sel);
    }
    let c = PairProfile::of(&work.m, n);
    let set = find_type_anomaly(&c)?;
    let t = c.type_of(&set);
    let (ones, zeros): (Vec<usize>, Vec<usize>) = set.iter().partition(|&&i| c.sigma(i, &set));
    let order: Vec<usize> = ones.into_iter().chain(zeros).collect();
    work.move_pairs_last(n, &order);
    // The prefix selection leaves ones exactly in the last t - 1 rows, which
    // the full pairs of those rows cancel.
    let p = n - set.len();
    let mut sel = select_prefix(&work.m, p, &BitVector::zeros(p));
    sel.extend((n + 1 - t..n).flat_map(|r| [2 * r, 2 * r + 1]));
    Ok(sel)
}

/// Picks `2m` columns with zero sum from a binormal matrix of `m` even.
///
/// Without `duplicate`, the matrix is `(2m+1) x (4m+2)`. With it, the
/// matrix has one more column, columns sum to zero, the named columns are
/// equal, and the witness uses at most one of them.
pub fn extract_even_case(m: &BitMatrix, half: usize, duplicate: Option<(usize, usize)>) -> Result<ZeroSumWitness> {
    if half % 2 == 1 {
        return Err(Error::Precondition(format!("m = {half} is odd")));
    }
    let n = 2 * half + 1;
    let Some((a, b)) = duplicate else {
        check_shape(m, n, 2 * n)?;
        validate_binormal(m, n)?;
        let mut work = Work::new(m);
        let sel = even_core(&mut work, n)?;
        return witness_in(m, work.pull_back(&sel), 2 * half);
    };

    check_shape(m, n, 2 * n + 1)?;
    validate_binormal(m, n)?;
    if a == b || a >= m.cols() || b >= m.cols() || m.column(a) != m.column(b) {
        return Err(Error::Precondition(format!("columns {a} and {b} are not a duplicate pair")));
    }
    if !m.column_sum(&(0..m.cols()).collect::<Vec<_>>()).is_zero() {
        return Err(Error::Precondition("columns do not sum to zero".into()));
    }
    let mut work = Work::new(m);
    let last = 2 * n;
    let sel = if a == last || b == last {
        even_core(&mut work, n)?
    } else {
        duplicate_core(&mut work, n, a, b)?
    };
    let w = witness_in(m, work.pull_back(&sel), 2 * half)?;
    if w.indices().contains(&a) && w.indices().contains(&b) {
        return Err(Error::Validation("witness uses both duplicate columns".into()));
    }
    Ok(w)
}

fn duplicate_core(work: &mut Work, n: usize, a: usize, b: usize) -> Result<Vec<usize>> {
    // Put the duplicates at the second slots of the last two pairs.
    for c in [a, b] {
        if c % 2 == 0 {
            work.apply(ElementaryOp::SwapColumns(c, c + 1));
        }
    }
    work.move_pairs_last(n, &[a / 2, b / 2]);
    let (r1, r2) = (n - 2, n - 1);
    let last = 2 * n;
    debug_assert_eq!(work.m.column(2 * r1 + 1), work.m.column(2 * r2 + 1));

    if !work.m.get(r2, 2 * r1) && work.m.get(r1, 2 * r2) {
        work.swap_pairs(r1, r2);
    }
    if work.m.get(r2, 2 * r1) {
        // Row r2 has 0 under column 2 r2 and 1 under the all-ones last
        // column. Clearing the other rows' disagreements between those two
        // columns and then swapping the last column into pair r2 restores
        // the pair structure, with a duplicate moved outside the pairs.
        for i in 0..r2 {
            if work.m.get(i, 2 * r2) != work.m.get(i, last) {
                work.apply(ElementaryOp::AddRow { src: r2, dst: i });
            }
        }
        work.apply(ElementaryOp::SwapColumns(2 * r2 + 1, last));
        validate_binormal(&work.m, n)?;
        return even_core(work, n);
    }

    let prefix_parity = |w: &Work, r: usize| (0..n - 2).filter(|&q| w.m.get(r, 2 * q)).count() % 2 == 1;
    if !prefix_parity(work, r1) && prefix_parity(work, r2) {
        work.swap_pairs(r1, r2);
    }
    if !prefix_parity(work, r2) {
        return Ok(select_prefix(&work.m, n - 1, &BitVector::zeros(n - 1)));
    }
    let mut sel = select_prefix(&work.m, n - 2, &BitVector::ones(n - 2));
    sel.push(last);
    Ok(sel)
}

/// Zeroes a dependent row of `m` with row additions and drops it.
fn drop_dependent_row(m: &BitMatrix) -> BitMatrix {
    let combo = m.transpose().nullspace_basis().into_iter().next().expect("rows are dependent");
    let mut work = Work::new(m);
    let pivot = combo.ones_iter().next().expect("nonzero combination");
    for r in combo.ones_iter().skip(1) {
        work.apply(ElementaryOp::AddRow { src: r, dst: pivot });
    }
    debug_assert!(work.m.row(pivot).is_zero());
    work.m.remove_row(pivot)
}

/// Translates every column by `v`; even-size zero sums are unchanged.
fn translated(m: &BitMatrix, v: BitVector) -> BitMatrix {
    let mut work = Work::new(m);
    work.apply(ElementaryOp::AddVectorToColumns(v));
    work.m
}

fn prefix_columns(m: &BitMatrix, len: usize) -> BitMatrix {
    m.select_columns(&(0..len).collect::<Vec<_>>())
}

fn by_dp(m: &BitMatrix, length: usize) -> Result<Vec<usize>> {
    let seq = GroupSequence::from_matrix_columns(m);
    match dp_zero_sum_witness(&seq, length)? {
        Some(w) => Ok(w.indices().to_vec()),
        None => Err(Error::CertifiedAbsent { length }),
    }
}

/// Column indices of a `2 half`-term zero sum among the columns of `m`.
fn drive(m: &BitMatrix, half: usize) -> Result<Vec<usize>> {
    let (d, len) = (m.rows(), m.cols());
    let k = 2 * half;
    if d == k && len > 2 * k {
        let m = prefix_columns(m, 2 * k + 1);
        let total = m.column_sum(&(0..m.cols()).collect::<Vec<_>>());
        let t = translated(&m, total);
        if t.rank() < d {
            return drive(&drop_dependent_row(&t), half);
        }
        return Ok(extract_via_enomoto(&t)?.indices().to_vec());
    }
    if d == k + 1 && half % 2 == 1 && len >= 2 * k + 5 {
        let m = prefix_columns(m, 2 * k + 5);
        let total = m.column_sum(&(0..m.cols()).collect::<Vec<_>>());
        let t = translated(&m, total);
        if t.rank() < d {
            return drive(&drop_dependent_row(&t), half);
        }
        let b = to_binormal_form(&t)?;
        let w = extract_odd_case(b.matrix(), half)?;
        return Ok(b.pull_back(w.indices()));
    }
    if d == k + 1 && half % 2 == 0 && len >= 2 * k + 2 {
        let n = 2 * k + 2;
        let m = prefix_columns(m, n);
        let total = m.column_sum(&(0..n).collect::<Vec<_>>());
        let shift = &total ^ &m.column(n - 1);
        let t = translated(&m, shift);
        if t.rank() < d {
            return drive(&drop_dependent_row(&t), half);
        }
        // Appending the total makes the last two columns equal and the
        // whole sum zero.
        let extended = t.with_column(&total)?;
        let b = to_binormal_form(&extended)?;
        let origin = b.log().column_origin(n + 1);
        let at = |c: usize| origin.iter().position(|&o| o == c).expect("bijection");
        let w = extract_even_case(b.matrix(), half, Some((at(n - 1), at(n))))?;
        let mut picked = b.pull_back(w.indices());
        if picked.contains(&n) {
            if picked.contains(&(n - 1)) {
                return Err(Error::Validation("witness uses both copies of the appended column".into()));
            }
            picked.retain(|&c| c != n);
            picked.push(n - 1);
        }
        return Ok(picked);
    }
    by_dp(m, k)
}

/// Finds `2m` terms of `seq` summing to zero.
///
/// For dimension `2m` and `2m + 1` at or above the guaranteed length, the
/// witness is constructed through binormal forms. Every other case falls back
/// to the exact dynamic program, which reports a certified absence when no
/// witness exists. The result is always revalidated against `seq`.
pub fn extract_zero_sum(seq: &GroupSequence, half: usize) -> Result<ZeroSumWitness> {
    if half == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    let indices = drive(&seq.to_matrix(), half)?;
    let w = ZeroSumWitness::new(indices)?;
    w.validate(seq, 2 * half)?;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerosum::has_zero_sum;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_binormal(rng: &mut ChaCha8Rng, k: usize, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::from_fn(k, cols, |_, _| rng.gen::<bool>());
        for j in 0..k {
            for i in 0..k {
                let v = m.get(i, 2 * j);
                m = m.with_entry(i, 2 * j + 1, if i == j { !v } else { v });
            }
        }
        m
    }

    #[test]
    fn equal_pair_is_found_in_the_plane() {
        let seq = GroupSequence::from_u64s(2, &[0b00, 0b10, 0b01, 0b11, 0b11]);
        assert_eq!(extract_zero_sum(&seq, 1).unwrap().indices(), &[3, 4]);
    }

    #[test]
    fn single_row_enomoto() {
        let m = BitMatrix::from_fn(1, 3, |_, c| c < 2);
        assert_eq!(extract_via_enomoto(&m).unwrap().indices(), &[2]);
    }

    #[test]
    fn odd_case_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for half in [1, 3] {
            let n = 2 * half + 1;
            for _ in 0..200 {
                let m = random_binormal(&mut rng, n, 2 * n + 3);
                let w = extract_odd_case(&m, half).unwrap();
                assert_eq!(w.len(), 2 * half);
            }
        }
    }

    #[test]
    fn odd_case_takes_the_even_row_branch() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random_binormal(&mut rng, 3, 9);
        // Row 1 of the profile becomes all zeros.
        let m = m.with_entry(1, 0, false).with_entry(1, 1, false).with_entry(1, 4, false).with_entry(1, 5, false);
        assert!(!PairProfile::of(&m, 3).row_parity(1));
        let w = extract_odd_case(&m, 1).unwrap();
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn even_case_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (half, trials) in [(2, 300), (4, 60)] {
            let n = 2 * half + 1;
            for _ in 0..trials {
                let m = random_binormal(&mut rng, n, 2 * n);
                assert_eq!(extract_even_case(&m, half, None).unwrap().len(), 2 * half);
            }
        }
        assert!(extract_even_case(&BitMatrix::zeros(3, 6), 1, None).is_err());
    }

    #[test]
    fn even_case_with_duplicates_avoids_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut done = 0;
        while done < 200 {
            let mut m = random_binormal(&mut rng, 5, 11);
            // Column 9 repeats column 7 and column 8 is its partner; the last
            // column restores a zero sum.
            for r in 0..5 {
                m = m.with_entry(r, 9, m.get(r, 7)).with_entry(r, 8, m.get(r, 7) ^ (r == 4));
            }
            let rest = m.column_sum(&(0..10).collect::<Vec<_>>());
            for r in 0..5 {
                m = m.with_entry(r, 10, rest.get(r));
            }
            assert!(crate::witness::is_binormal(&m, 5));
            let w = extract_even_case(&m, 2, Some((7, 9))).unwrap();
            assert!(!(w.indices().contains(&7) && w.indices().contains(&9)));
            done += 1;
        }
        assert!(extract_even_case(&BitMatrix::zeros(5, 11), 2, Some((0, 1))).is_err());
    }

    #[test]
    fn threshold_sequences_always_yield_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (half, d, len) in [(1, 2, 5), (1, 3, 9), (2, 4, 9), (2, 5, 10), (3, 6, 13), (3, 7, 17)] {
            for _ in 0..100 {
                let values: Vec<u64> = (0..len).map(|_| rng.gen_range(0..1u64 << d)).collect();
                let seq = GroupSequence::from_u64s(d, &values);
                let w = extract_zero_sum(&seq, half).unwrap();
                assert_eq!(w.len(), 2 * half);
            }
        }
    }

    #[test]
    fn below_threshold_falls_back_to_dp() {
        let seq = GroupSequence::from_u64s(2, &[0, 1, 2, 3]);
        assert!(!has_zero_sum(&seq, 2).unwrap());
        assert!(matches!(extract_zero_sum(&seq, 1), Err(Error::CertifiedAbsent { length: 2 })));
        let small = GroupSequence::from_u64s(1, &[1, 1, 0]);
        assert_eq!(extract_zero_sum(&small, 1).unwrap().indices(), &[0, 1]);
    }
}
