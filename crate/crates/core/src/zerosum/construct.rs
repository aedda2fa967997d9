//! Explicit extremal objects behind the lower bounds.

use crate::error::{Error, Result};
use crate::gf2::BitVector;

use super::dp::{has_zero_sum, validate_set};
use super::sequence::GroupSequence;
use super::weights::WeightSet;

/// Set validation keeps `(max size + 1) * 2^d` counters; above this
/// dimension constructions are returned unvalidated.
pub const MAX_VALIDATED_DIM: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `2m - 1` zeros and the unit vectors, plus the all-ones vector when
    /// `d >= 2m`. Only `k = 2` is supported.
    GaoLower { k: usize, m: usize, d: usize },
    /// Appends a zero coordinate to every element of a sequence without a
    /// zero-sum subsequence of length `2m`, then appends the new unit vector.
    Lift { m: usize, sequence: GroupSequence },
    /// `A x {0, 1}` for a set `A` with no zero-sum subset of size in
    /// `2[1,m]`, `m` odd.
    Doubling { m: usize, set: Vec<BitVector> },
    /// `(B + y) \ {0}` for `B` with no zero-sum subset of size in `2[1,m]`
    /// and `y` in `B`.
    Translation { m: usize, set: Vec<BitVector>, shift: BitVector },
    /// `2m + 2` distinct elements with zero total.
    ZeroTotal { m: usize, d: usize },
    /// The unit vectors and the all-ones vector, `d >= 2m`.
    BasisPlusOnes { m: usize, d: usize },
    /// The unit vectors and two vectors `x`, `y` with `x`, `y`, `x + y` all
    /// of weight `2m`, `d >= 3m`.
    TwoHeavy { m: usize, d: usize },
}

/// What a construction returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructed {
    pub dim: usize,
    pub elements: Vec<BitVector>,
    /// A set (distinct elements) rather than a sequence.
    pub is_set: bool,
    /// Zero-sum sizes the object avoids.
    pub avoided: Vec<usize>,
    /// False when the object was too large to check ("constructed-unvalidated").
    pub validated: bool,
}

impl Constructed {
    #[must_use]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The elements as a sequence.
    #[must_use]
    pub fn sequence(&self) -> GroupSequence {
        GroupSequence::new(self.dim, self.elements.clone()).expect("elements share the dimension")
    }
}

fn basis(d: usize) -> Vec<BitVector> {
    (0..d).map(|i| BitVector::unit(d, i)).collect()
}

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

fn check_input_set(d: usize, set: &[BitVector], m: usize) -> Result<()> {
    validate_set(d, set, WeightSet::even_range(1, m).sizes())
        .map_err(|e| Error::Precondition(format!("input set is not admissible: {e}")))
}

fn set_dim(set: &[BitVector]) -> Result<usize> {
    set.first()
        .map(BitVector::dim)
        .ok_or_else(|| Error::Precondition("input set is empty".into()))
}

/// Builds the object and checks that it avoids the claimed sizes.
pub fn construct_extremal(kind: &Construction) -> Result<Constructed> {
    let (dim, elements, is_set, avoided) = match kind {
        Construction::GaoLower { k, m, d } => {
            need(*k == 2, || format!("only k = 2 is implemented, got k = {k}"))?;
            need(*m >= 1, || "m must be positive".into())?;
            let mut e = vec![BitVector::zeros(*d); 2 * m - 1];
            e.extend(basis(*d));
            if *d >= 2 * m {
                e.push(BitVector::ones(*d));
            }
            (*d, e, false, vec![2 * m])
        }
        Construction::Lift { m, sequence } => {
            need(*m >= 1, || "m must be positive".into())?;
            let d = sequence.dim();
            let mut e: Vec<BitVector> = sequence.elements().iter().map(|v| v.extended(false)).collect();
            e.push(BitVector::unit(d + 1, d));
            (d + 1, e, false, vec![2 * m])
        }
        Construction::Doubling { m, set } => {
            need(m % 2 == 1, || format!("doubling needs odd m, got {m}"))?;
            let d = set_dim(set)?;
            check_input_set(d, set, *m)?;
            let mut e: Vec<BitVector> = set.iter().map(|v| v.extended(false)).collect();
            e.extend(set.iter().map(|v| v.extended(true)));
            let mut avoided = vec![2 * m];
            if set.len() % 2 == 0 && set.len() > *m {
                avoided.push(2 * set.len() - 2 * m);
            }
            (d + 1, e, true, avoided)
        }
        Construction::Translation { m, set, shift } => {
            let d = set_dim(set)?;
            check_input_set(d, set, *m)?;
            need(set.contains(shift), || "the shift must belong to the set".into())?;
            let e: Vec<BitVector> = set.iter().map(|v| v ^ shift).filter(|v| !v.is_zero()).collect();
            (d, e, true, (1..=2 * m).collect())
        }
        Construction::ZeroTotal { m, d } => {
            let size = 2 * m + 2;
            need(*d < 63 && size as u64 <= 1u64 << d, || format!("{size} elements do not fit in Z_2^{d}"))?;
            need((size as u64) + 2 != 1u64 << d, || {
                format!("no {size} distinct elements of Z_2^{d} sum to zero")
            })?;
            let picked = zero_total_set(*d, size)
                .ok_or_else(|| Error::Precondition(format!("no zero-total set of size {size} in Z_2^{d}")))?;
            let e = picked.into_iter().map(|v| BitVector::from_u64(*d, v)).collect();
            (*d, e, true, vec![2 * m])
        }
        Construction::BasisPlusOnes { m, d } => {
            need(*d >= 2 * m, || format!("needs d >= 2m, got d = {d}, m = {m}"))?;
            let mut e = basis(*d);
            e.push(BitVector::ones(*d));
            (*d, e, true, (1..=2 * m).collect())
        }
        Construction::TwoHeavy { m, d } => {
            need(*m >= 1 && *d >= 3 * m, || format!("needs d >= 3m, got d = {d}, m = {m}"))?;
            let mut x = BitVector::zeros(*d);
            let mut y = BitVector::zeros(*d);
            for i in 0..2 * m {
                x.set(i, true);
                y.set(m + i, true);
            }
            let mut e = basis(*d);
            e.push(x);
            e.push(y);
            (*d, e, true, (1..=2 * m).collect())
        }
    };
    let validated = validate(dim, &elements, is_set, &avoided)?;
    Ok(Constructed {
        dim,
        elements,
        is_set,
        avoided,
        validated,
    })
}

/// Lexicographically first `size - 1` values whose sum completes them to a
/// zero-total set of distinct elements.
fn zero_total_set(d: usize, size: usize) -> Option<Vec<u64>> {
    let group = 1u64 << d;
    let k = size - 1;
    let mut combo: Vec<u64> = (0..k as u64).collect();
    loop {
        let x = combo.iter().fold(0, |a, &b| a ^ b);
        if !combo.contains(&x) {
            let mut out = combo.clone();
            out.push(x);
            return Some(out);
        }
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if combo[i] < group - (k - i) as u64 {
                break;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

fn validate(dim: usize, elements: &[BitVector], is_set: bool, avoided: &[usize]) -> Result<bool> {
    if dim > MAX_VALIDATED_DIM {
        return Ok(false);
    }
    if is_set {
        validate_set(dim, elements, avoided).map_err(|e| Error::Validation(format!("construction: {e}")))?;
        return Ok(true);
    }
    let seq = GroupSequence::new(dim, elements.to_vec())?;
    for &w in avoided {
        match has_zero_sum(&seq, w) {
            Ok(true) => return Err(Error::Validation(format!("construction has a zero-sum subsequence of length {w}"))),
            Ok(false) => {}
            Err(Error::Guard { .. }) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gao_lower_example() {
        let c = construct_extremal(&Construction::GaoLower { k: 2, m: 2, d: 3 }).unwrap();
        let text: Vec<String> = c.elements.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["000", "000", "000", "100", "010", "001"]);
        assert!(c.validated);
        assert!(construct_extremal(&Construction::GaoLower { k: 3, m: 2, d: 3 }).is_err());
        let ones = construct_extremal(&Construction::GaoLower { k: 2, m: 1, d: 2 }).unwrap();
        assert_eq!(ones.len(), 4);
    }

    #[test]
    fn basis_plus_ones_example() {
        let c = construct_extremal(&Construction::BasisPlusOnes { m: 2, d: 4 }).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.avoided, vec![1, 2, 3, 4]);
        assert!(construct_extremal(&Construction::BasisPlusOnes { m: 2, d: 3 }).is_err());
    }

    #[test]
    fn doubling_minimal_case() {
        let a = vec![BitVector::parse("0").unwrap(), BitVector::parse("1").unwrap()];
        let c = construct_extremal(&Construction::Doubling { m: 1, set: a }).unwrap();
        let text: Vec<String> = c.elements.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["00", "10", "01", "11"]);
        assert!(c.validated);
        let bad = vec![BitVector::parse("0").unwrap()];
        assert!(construct_extremal(&Construction::Doubling { m: 2, set: bad }).is_err());
    }

    #[test]
    fn two_heavy_and_translation() {
        let c = construct_extremal(&Construction::TwoHeavy { m: 2, d: 6 }).unwrap();
        assert_eq!(c.len(), 8);
        let b: Vec<BitVector> = (0..4).map(|v| BitVector::from_u64(2, v)).collect();
        let t = construct_extremal(&Construction::Translation {
            m: 1,
            set: b,
            shift: BitVector::from_u64(2, 1),
        })
        .unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn zero_total_sets() {
        let c = construct_extremal(&Construction::ZeroTotal { m: 2, d: 3 });
        assert!(c.is_err(), "size 6 = 2^3 - 2 is impossible");
        let c = construct_extremal(&Construction::ZeroTotal { m: 3, d: 3 }).unwrap();
        assert_eq!(c.len(), 8);
        let c = construct_extremal(&Construction::ZeroTotal { m: 1, d: 2 }).unwrap();
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn lift_adds_one() {
        let g = construct_extremal(&Construction::GaoLower { k: 2, m: 2, d: 3 }).unwrap();
        let l = construct_extremal(&Construction::Lift {
            m: 2,
            sequence: g.sequence(),
        })
        .unwrap();
        assert_eq!((l.dim, l.len()), (4, 7));
    }
}
