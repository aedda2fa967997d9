//! Linear binary codes described by parity-check matrices.
//!
//! Everything downstream argues on the parity-check side: the columns of a
//! parity-check matrix are a sequence over `Z_2^r`, and a codeword of weight
//! `w` is exactly a set of `w` columns summing to zero.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest dimension enumerated word by word.
pub const MAX_ENUMERATED_DIMENSION: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    parity_check: BitMatrix,
}

impl LinearCode {
    /// Wraps a parity-check matrix, which must have full row rank.
    pub fn new(parity_check: BitMatrix) -> Result<Self> {
        let rank = parity_check.rank();
        if rank != parity_check.rows() {
            return Err(Error::RankDeficient {
                rank,
                rows: parity_check.rows(),
            });
        }
        Ok(Self { parity_check })
    }

    /// The code spanned by `generators` (which need not be independent).
    pub fn from_generators(length: usize, generators: Vec<BitVector>) -> Result<Self> {
        let g = BitMatrix::from_rows(length, generators)?;
        let h = BitMatrix::from_rows(length, g.nullspace_basis())?;
        Self::new(h)
    }

    /// Any matrix, reduced to an independent set of rows first.
    pub fn from_any_parity_check(m: &BitMatrix) -> Result<Self> {
        Self::new(BitMatrix::from_rows(m.cols(), m.row_space_basis())?)
    }

    #[must_use]
    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    #[must_use]
    pub fn length(&self) -> usize {
        self.parity_check.cols()
    }

    #[must_use]
    pub fn redundancy(&self) -> usize {
        self.parity_check.rows()
    }

    #[must_use]
    pub fn dimension(&self) -> usize {
        self.length() - self.redundancy()
    }

    #[must_use]
    pub fn generator_basis(&self) -> Vec<BitVector> {
        self.parity_check.nullspace_basis()
    }

    #[must_use]
    pub fn contains(&self, word: &BitVector) -> bool {
        word.dim() == self.length() && self.parity_check.mul_vec(word).is_ok_and(|s| s.is_zero())
    }

    /// Every codeword, enumerated in Gray-code order starting from zero.
    pub fn words(&self) -> Result<Vec<BitVector>> {
        span_words(self.length(), &self.generator_basis())
    }
}

fn span_words(length: usize, basis: &[BitVector]) -> Result<Vec<BitVector>> {
    if basis.len() > MAX_ENUMERATED_DIMENSION {
        return Err(Error::Guard {
            what: "code dimension",
            value: basis.len(),
            limit: MAX_ENUMERATED_DIMENSION,
        });
    }
    let mut words = Vec::with_capacity(1 << basis.len());
    let mut current = BitVector::zeros(length);
    words.push(current.clone());
    for i in 1u64..(1u64 << basis.len()) {
        current ^= &basis[i.trailing_zeros() as usize];
        words.push(current.clone());
    }
    Ok(words)
}

/// `counts[j]` is the number of words of Hamming weight `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    /// # Panics
    /// Panics on an empty count vector.
    #[must_use]
    pub fn new(counts: Vec<u64>) -> Self {
        assert!(!counts.is_empty(), "a weight distribution has at least the zero weight");
        Self { counts }
    }

    #[must_use]
    pub fn length(&self) -> usize {
        self.counts.len() - 1
    }

    #[must_use]
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[must_use]
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Smallest positive weight that occurs.
    #[must_use]
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&j| self.counts[j] > 0)
    }
}

pub fn weight_distribution(code: &LinearCode) -> Result<WeightDistribution> {
    let mut counts = vec![0u64; code.length() + 1];
    for w in code.words()? {
        counts[w.weight()] += 1;
    }
    Ok(WeightDistribution { counts })
}

/// The dual code. Its parity-check matrix is a generator matrix of `code`.
#[must_use]
pub fn dual(code: &LinearCode) -> LinearCode {
    let g = BitMatrix::from_rows(code.length(), code.generator_basis()).expect("generator rows have the code length");
    LinearCode { parity_check: g }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    /// The zero-dimensional code.
    Infinite,
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(d) => write!(f, "{d}"),
            Self::Infinite => write!(f, "inf"),
        }
    }
}

pub fn min_distance(code: &LinearCode) -> Result<Distance> {
    if code.dimension() == 0 {
        return Ok(Distance::Infinite);
    }
    let dist = weight_distribution(code)?;
    Ok(Distance::Finite(dist.min_nonzero_weight().expect("a nonzero code has a nonzero word")))
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Checks the MacWilliams identities
/// `2^(n-k) * sum_{j<=l} C(n-j, l-j) A_j = 2^l * sum_{j<=n-l} C(n-j, l) B_j`
/// for every `l = 0..=n`, in exact arithmetic.
pub fn verify_macwilliams(a: &WeightDistribution, b: &WeightDistribution, n: usize, k: usize) -> Result<bool> {
    for dist in [a, b] {
        if dist.counts.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: dist.counts.len(),
            });
        }
    }
    if k > n {
        return Err(Error::Precondition(format!("dimension {k} exceeds length {n}")));
    }
    let n64 = n as u64;
    for lambda in 0..=n64 {
        let lhs: BigUint = (0..=lambda)
            .map(|j| binomial(n64 - j, lambda - j) * BigUint::from(a.counts[j as usize]))
            .sum::<BigUint>()
            << (n - k);
        let rhs: BigUint = (0..=n64 - lambda)
            .map(|j| binomial(n64 - j, lambda) * BigUint::from(b.counts[j as usize]))
            .sum::<BigUint>()
            << lambda as usize;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether a length-`n` code correcting `t` errors fits in redundancy `r`:
/// `sum_{i<=t} C(n, i) <= 2^r`.
#[must_use]
pub fn hamming_bound_holds(r: usize, t: usize, n: usize) -> bool {
    let volume: BigUint = (0..=t as u64).map(|i| binomial(n as u64, i)).sum();
    volume <= BigUint::one() << r
}

/// Largest `n` allowed by the sphere-packing bound for redundancy `r` and
/// distance `2t + 1`.
#[must_use]
pub fn hamming_max_length(r: usize, t: usize) -> u64 {
    if t == 0 {
        return u64::MAX;
    }
    let (mut lo, mut hi) = (0u64, 1u64 << r.min(62));
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if hamming_bound_holds(r, t, mid as usize) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Known range of `N(r, delta)`, the longest length of a linear code with
/// redundancy `r` and distance at least `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeTableEntry {
    pub redundancy: usize,
    pub distance: usize,
    pub lower: u64,
    pub upper: u64,
}

impl CodeTableEntry {
    #[must_use]
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

// N(r, 5) for r = 4..=14. Entries past r = 10 are intervals from published
// code tables and are kept as data, never extrapolated.
const N5_TABLE: [(u64, u64); 11] = [
    (5, 5),
    (6, 6),
    (8, 8),
    (11, 11),
    (17, 17),
    (23, 23),
    (33, 33),
    (47, 57),
    (65, 88),
    (81, 124),
    (128, 179),
];

pub const N5_TABLE_RANGE: std::ops::RangeInclusive<usize> = 4..=14;

pub fn n_table(r: usize, distance: usize) -> Result<CodeTableEntry> {
    match distance {
        3 if r <= 63 => {
            let n = (1u64 << r) - 1;
            Ok(CodeTableEntry {
                redundancy: r,
                distance,
                lower: n,
                upper: n,
            })
        }
        5 if N5_TABLE_RANGE.contains(&r) => {
            let (lower, upper) = N5_TABLE[r - 4];
            Ok(CodeTableEntry {
                redundancy: r,
                distance,
                lower,
                upper,
            })
        }
        _ => Err(Error::NotTabulated(format!("N({r},{distance})"))),
    }
}

/// Whether the code has a word of weight 2 or 4, read off the columns of the
/// parity-check matrix: weight 2 means two equal columns, and without those
/// a weight-4 word means two disjoint column pairs with equal sums.
#[must_use]
pub fn has_weight_two_or_four(code: &LinearCode) -> bool {
    let cols = code.parity_check().columns();
    let distinct: HashSet<&BitVector> = cols.iter().collect();
    if distinct.len() < cols.len() {
        return true;
    }
    let mut sums = HashSet::new();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            if !sums.insert(&cols[i] ^ &cols[j]) {
                return true;
            }
        }
    }
    false
}

fn lex_less(a: &BitVector, b: &BitVector) -> bool {
    (0..a.dim()).find(|&i| a.get(i) != b.get(i)).is_some_and(|i| !a.get(i))
}

/// For a code of length `n >= 10` without words of weight 2 or 4, returns a
/// nonzero dual word whose weight `l` satisfies `|l - n/2| >= 2`.
///
/// The word maximizing `|l - n/2|` is chosen, ties going to the
/// lexicographically smallest bit string (coordinate 0 first).
pub fn find_unbalanced_dual_word(code: &LinearCode) -> Result<BitVector> {
    let n = code.length();
    if n < 10 {
        return Err(Error::Precondition(format!("length {n} is below 10")));
    }
    if has_weight_two_or_four(code) {
        return Err(Error::Precondition("code has a word of weight 2 or 4".into()));
    }
    let dual_basis = code.parity_check().row_space_basis();
    let mut best: Option<(usize, BitVector)> = None;
    for word in span_words(n, &dual_basis)?.into_iter().skip(1) {
        let skew = (2 * word.weight()).abs_diff(n);
        let better = match &best {
            None => true,
            Some((s, w)) => skew > *s || (skew == *s && lex_less(&word, w)),
        };
        if better {
            best = Some((skew, word));
        }
    }
    match best {
        Some((skew, word)) if skew >= 4 => Ok(word),
        _ => Err(Error::Validation(
            "no dual word is unbalanced by at least 2; the input violates the lemma's hypotheses".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(rows: &[&str]) -> LinearCode {
        let n = rows[0].len();
        LinearCode::new(BitMatrix::from_rows(n, rows.iter().map(|r| BitVector::parse(r).unwrap()).collect()).unwrap())
            .unwrap()
    }

    #[test]
    fn weight_distribution_examples() {
        // Parity checks {110, 011} leave only 000 and 111.
        let rep = code(&["110", "011"]);
        assert_eq!(weight_distribution(&rep).unwrap().counts(), &[1, 0, 0, 1]);
        let trivial = LinearCode::new(BitMatrix::identity(4)).unwrap();
        assert_eq!(weight_distribution(&trivial).unwrap().counts(), &[1, 0, 0, 0, 0]);
        let even = code(&["111"]);
        assert_eq!(weight_distribution(&even).unwrap().counts(), &[1, 0, 3, 0]);
    }

    #[test]
    fn dual_examples() {
        let even = code(&["111"]);
        let d = dual(&even);
        assert_eq!(d.dimension(), 1);
        assert!(d.contains(&BitVector::parse("111").unwrap()));
        assert_eq!(dual(&d).parity_check().row_space_basis(), even.parity_check().row_space_basis());

        let full = LinearCode::new(BitMatrix::zeros(0, 5)).unwrap();
        let zero = dual(&full);
        assert_eq!(zero.dimension(), 0);
        assert_eq!(zero.redundancy(), 5);
    }

    #[test]
    fn rank_deficient_parity_check_is_rejected() {
        let m = BitMatrix::from_rows(3, vec![BitVector::parse("110").unwrap(); 2]).unwrap();
        assert!(matches!(LinearCode::new(m), Err(Error::RankDeficient { rank: 1, rows: 2 })));
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_distance(&code(&["110", "011"])).unwrap(), Distance::Finite(3));
        assert_eq!(
            min_distance(&LinearCode::new(BitMatrix::identity(3)).unwrap()).unwrap(),
            Distance::Infinite
        );
        let c = LinearCode::from_generators(
            4,
            vec![BitVector::parse("1110").unwrap(), BitVector::parse("0111").unwrap()],
        )
        .unwrap();
        assert_eq!(min_distance(&c).unwrap(), Distance::Finite(2));
    }

    #[test]
    fn macwilliams_examples() {
        let a = WeightDistribution::new(vec![1, 0, 0, 1]);
        let b = WeightDistribution::new(vec![1, 0, 3, 0]);
        assert!(verify_macwilliams(&a, &b, 3, 1).unwrap());
        let one = WeightDistribution::new(vec![1]);
        assert!(verify_macwilliams(&one, &one, 0, 0).unwrap());
        for i in 0..4 {
            let mut counts = b.counts().to_vec();
            counts[i] += 1;
            assert!(!verify_macwilliams(&a, &WeightDistribution::new(counts), 3, 1).unwrap());
        }
        assert!(verify_macwilliams(&a, &one, 3, 1).is_err());
    }

    #[test]
    fn hamming_bound_examples() {
        assert!(hamming_bound_holds(4, 2, 5));
        assert!(!hamming_bound_holds(4, 2, 6));
        assert!(hamming_bound_holds(0, 0, 1000));
        assert_eq!(hamming_max_length(4, 2), 5);
        assert_eq!(hamming_max_length(3, 1), 7);
    }

    #[test]
    fn table_lookups() {
        assert_eq!(n_table(8, 5).unwrap().lower, 17);
        assert!(n_table(8, 5).unwrap().is_exact());
        let e = n_table(11, 5).unwrap();
        assert_eq!((e.lower, e.upper), (47, 57));
        assert_eq!(n_table(4, 3).unwrap().upper, 15);
        assert!(n_table(3, 5).is_err());
        assert!(n_table(15, 5).is_err());
        assert!(n_table(6, 7).is_err());
    }

    #[test]
    fn table_respects_hamming_bound() {
        for r in N5_TABLE_RANGE {
            let e = n_table(r, 5).unwrap();
            assert!(e.lower <= e.upper);
            assert!(hamming_bound_holds(r, 2, e.upper as usize), "r = {r}");
        }
    }

    #[test]
    fn unbalanced_dual_word_examples() {
        let c = LinearCode::from_generators(10, vec![BitVector::parse("1111110000").unwrap()]).unwrap();
        let w = find_unbalanced_dual_word(&c).unwrap();
        assert!(dual(&c).contains(&w));
        assert!((2 * w.weight()).abs_diff(10) >= 4);

        let zero = LinearCode::new(BitMatrix::identity(10)).unwrap();
        assert_eq!(find_unbalanced_dual_word(&zero).unwrap(), BitVector::ones(10));

        let with_pair = LinearCode::from_generators(11, vec![BitVector::parse("11000000000").unwrap()]).unwrap();
        assert!(matches!(find_unbalanced_dual_word(&with_pair), Err(Error::Precondition(_))));

        let short = LinearCode::new(BitMatrix::identity(9)).unwrap();
        assert!(find_unbalanced_dual_word(&short).is_err());
    }
}
