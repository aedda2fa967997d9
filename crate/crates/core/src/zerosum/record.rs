use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

use super::dp::{has_zero_sum, validate_set};
use super::sequence::GroupSequence;
use super::weights::WeightSet;

/// One of the tracked constants, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    /// `beta_W(d)`.
    Beta { weights: WeightSet, d: usize },
    /// `s_2m(d)`.
    S { m: usize, d: usize },
    /// `R_2m(n)`.
    R { m: usize, n: usize },
    /// `N(r, delta)`.
    N { r: usize, delta: usize },
}

impl Quantity {
    #[must_use]
    pub fn beta(weights: WeightSet, d: usize) -> Self {
        Self::Beta { weights, d }
    }

    #[must_use]
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Beta { .. } => "beta",
            Self::S { .. } => "s",
            Self::R { .. } => "R",
            Self::N { .. } => "N",
        }
    }

    /// Cache-format parameters, e.g. `W=2,4;d=6` or `m=2;n=9`.
    #[must_use]
    pub fn params(&self) -> String {
        match self {
            Self::Beta { weights, d } => format!("W={weights};d={d}"),
            Self::S { m, d } => format!("m={m};d={d}"),
            Self::R { m, n } => format!("m={m};n={n}"),
            Self::N { r, delta } => format!("r={r};delta={delta}"),
        }
    }

    pub fn from_kind_params(kind: &str, params: &str) -> Result<Self> {
        let mut fields = std::collections::BTreeMap::new();
        for part in params.split(';') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("parameter {part:?} lacks '='")))?;
            fields.insert(k, v);
        }
        let num = |k: &str| -> Result<usize> {
            fields
                .get(k)
                .ok_or_else(|| Error::Parse(format!("missing parameter {k}")))?
                .parse()
                .map_err(|e| Error::Parse(format!("parameter {k}: {e}")))
        };
        let q = match kind {
            "beta" => Self::Beta {
                weights: fields
                    .get("W")
                    .ok_or_else(|| Error::Parse("missing parameter W".into()))?
                    .parse()?,
                d: num("d")?,
            },
            "s" => Self::S { m: num("m")?, d: num("d")? },
            "R" => Self::R { m: num("m")?, n: num("n")? },
            "N" => Self::N {
                r: num("r")?,
                delta: num("delta")?,
            },
            other => return Err(Error::Parse(format!("unknown kind {other:?}"))),
        };
        if q.params() != params {
            return Err(Error::Parse(format!("non-canonical parameters {params:?}")));
        }
        Ok(q)
    }

    /// Dimension of the vectors in a witness, if the kind has witnesses.
    #[must_use]
    pub fn witness_dim(&self) -> Option<usize> {
        match self {
            Self::Beta { d, .. } | Self::S { d, .. } => Some(*d),
            Self::N { r, .. } => Some(*r),
            Self::R { .. } => None,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Beta { weights, d } => write!(f, "beta_{{{weights}}}({d})"),
            Self::S { m, d } => write!(f, "s_{}({d})", 2 * m),
            Self::R { m, n } => write!(f, "R_{}({n})", 2 * m),
            Self::N { r, delta } => write!(f, "N({r},{delta})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Exact,
    Bounded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Bounded => "bounded",
        })
    }
}

impl std::str::FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "bounded" => Ok(Self::Bounded),
            _ => Err(Error::Parse(format!("unknown status {s:?}"))),
        }
    }
}

/// One derivation step: the rule's tag and a readable statement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceStep {
    pub tag: String,
    pub detail: String,
}

impl TraceStep {
    #[must_use]
    pub fn new(tag: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            tag: tag.into(),
            detail: detail.into(),
        }
    }

    #[must_use]
    pub fn tag_only(tag: impl Into<String>) -> Self {
        Self {
            tag: tag.into(),
            detail: String::new(),
        }
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.detail.is_empty() {
            f.write_str(&self.tag)
        } else {
            write!(f, "{}: {}", self.tag, self.detail)
        }
    }
}

/// Known range of a constant together with how it was obtained.
///
/// A `beta` or `N` witness is a set attaining `lower`; an `s` witness is a
/// sequence of length `lower - 1` with no zero-sum subsequence of length
/// `2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantRecord {
    pub quantity: Quantity,
    pub lower: u64,
    pub upper: u64,
    pub status: Status,
    pub witness: Option<Vec<BitVector>>,
    pub trace: Vec<TraceStep>,
}

impl ConstantRecord {
    /// Builds a record, deriving the status from the interval.
    ///
    /// # Panics
    /// Panics if `lower > upper`.
    #[must_use]
    pub fn new(quantity: Quantity, lower: u64, upper: u64, witness: Option<Vec<BitVector>>, trace: Vec<TraceStep>) -> Self {
        assert!(lower <= upper, "{quantity}: lower {lower} exceeds upper {upper}");
        let status = if lower == upper { Status::Exact } else { Status::Bounded };
        Self {
            quantity,
            lower,
            upper,
            status,
            witness,
            trace,
        }
    }

    #[must_use]
    pub fn exact(quantity: Quantity, value: u64, witness: Option<Vec<BitVector>>, trace: Vec<TraceStep>) -> Self {
        Self::new(quantity, value, value, witness, trace)
    }

    #[must_use]
    pub fn is_exact(&self) -> bool {
        self.status == Status::Exact
    }

    #[must_use]
    pub fn value(&self) -> Option<u64> {
        self.is_exact().then_some(self.lower)
    }

    /// `s_4(4) = 9 (exact)` or `s_4(8) in [21, 25] (bounded)`.
    #[must_use]
    pub fn headline(&self) -> String {
        self.headline_as(&self.quantity.to_string())
    }

    #[must_use]
    pub fn headline_as(&self, name: &str) -> String {
        if self.is_exact() {
            format!("{name} = {} (exact)", self.lower)
        } else {
            format!("{name} in [{}, {}] (bounded)", self.lower, self.upper)
        }
    }

    /// Independently re-checks the witness and the interval invariants.
    pub fn validate(&self) -> Result<()> {
        if self.lower > self.upper {
            return Err(Error::Validation(format!("lower {} exceeds upper {}", self.lower, self.upper)));
        }
        if (self.status == Status::Exact) != (self.lower == self.upper) {
            return Err(Error::Validation("status disagrees with the interval".into()));
        }
        let Some(w) = &self.witness else {
            return Ok(());
        };
        match &self.quantity {
            Quantity::Beta { weights, d } => {
                check_len(w.len(), self.lower)?;
                validate_set(*d, w, weights.sizes())
            }
            Quantity::N { r, delta } => {
                check_len(w.len(), self.lower)?;
                validate_set(*r, w, &(1..*delta).collect::<Vec<_>>())
            }
            Quantity::S { m, d } => {
                check_len(w.len() + 1, self.lower)?;
                let seq = GroupSequence::new(*d, w.clone())?;
                if has_zero_sum(&seq, 2 * m)? {
                    Err(Error::Validation(format!("sequence has a zero-sum subsequence of length {}", 2 * m)))
                } else {
                    Ok(())
                }
            }
            Quantity::R { .. } => Err(Error::Validation("R records carry no witness".into())),
        }
    }
}

fn check_len(found: usize, expected: u64) -> Result<()> {
    if found as u64 == expected {
        Ok(())
    } else {
        Err(Error::Validation(format!("witness size {found} does not match the lower bound {expected}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_round_trip() {
        for q in [
            Quantity::beta("2,4".parse().unwrap(), 6),
            Quantity::S { m: 2, d: 7 },
            Quantity::R { m: 2, n: 9 },
            Quantity::N { r: 8, delta: 5 },
        ] {
            assert_eq!(Quantity::from_kind_params(q.kind(), &q.params()).unwrap(), q);
        }
        assert!(Quantity::from_kind_params("s", "d=7;m=2").is_err());
        assert!(Quantity::from_kind_params("t", "m=2;d=7").is_err());
        assert!(Quantity::from_kind_params("s", "m=2").is_err());
    }

    #[test]
    fn headlines() {
        let r = ConstantRecord::exact(Quantity::S { m: 2, d: 4 }, 9, None, vec![]);
        assert_eq!(r.headline(), "s_4(4) = 9 (exact)");
        let r = ConstantRecord::new(Quantity::S { m: 2, d: 8 }, 21, 25, None, vec![]);
        assert_eq!(r.headline(), "s_4(8) in [21, 25] (bounded)");
        assert_eq!(Quantity::beta(WeightSet::single(2), 3).to_string(), "beta_{4}(3)");
    }

    #[test]
    fn witness_validation() {
        let e = |v| BitVector::from_u64(2, v);
        let good = ConstantRecord::exact(Quantity::beta(WeightSet::single(2), 2), 3, Some(vec![e(0), e(1), e(2)]), vec![]);
        assert!(good.validate().is_ok());
        let full = ConstantRecord::exact(Quantity::beta(WeightSet::single(2), 2), 4, Some(vec![e(0), e(1), e(2), e(3)]), vec![]);
        assert!(full.validate().is_err());
        let seq = ConstantRecord::exact(Quantity::S { m: 1, d: 2 }, 5, Some(vec![e(0), e(1), e(2), e(3)]), vec![]);
        assert!(seq.validate().is_ok());
        let short = ConstantRecord::exact(Quantity::S { m: 1, d: 2 }, 5, Some(vec![e(0), e(1)]), vec![]);
        assert!(short.validate().is_err());
    }
}
