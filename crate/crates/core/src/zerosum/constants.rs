//! The sequence constant `s_2m(d)` and the redundancy `R_2m(n)`.

use std::collections::HashMap;

use crate::codes::n_table;
use crate::error::{Error, Result};

use super::construct::{construct_extremal, Construction};
use super::ledger::bounds_ledger;
use super::record::{ConstantRecord, Quantity, TraceStep};
use super::search::{beta_search, Budget};
use super::weights::WeightSet;

/// `s_2m(d)` when a closed form applies: `d < 2m`, `d = 2m`, `d = 2m + 1`,
/// or `m = 2` with `N(d, 5)` tabulated exactly.
#[must_use]
pub fn closed_form_s(m: usize, d: usize) -> Option<ConstantRecord> {
    if m == 0 {
        return None;
    }
    let q = Quantity::S { m, d };
    let (m64, d64) = (m as u64, d as u64);
    let (value, tag, detail) = if d < 2 * m {
        (2 * m64 + d64, "s-small-d", "s_2m(d) = 2m + d for d < 2m")
    } else if d == 2 * m {
        (4 * m64 + 1, "s-d-eq-2m", "s_2m(2m) = 4m + 1")
    } else if d == 2 * m + 1 && m % 2 == 1 {
        (4 * m64 + 5, "s-d-eq-2m+1-odd", "s_2m(2m+1) = 4m + 5 for odd m")
    } else if d == 2 * m + 1 {
        (4 * m64 + 2, "s-d-eq-2m+1-even", "s_2m(2m+1) = 4m + 2 for even m")
    } else if m == 2 {
        let e = n_table(d, 5).ok().filter(|e| e.is_exact())?;
        (e.lower + 4, "s4-from-n5", "s_4(d) = N(d,5) + 4")
    } else {
        return None;
    };
    // Zeros, the basis and possibly the all-ones vector attain the value
    // whenever its length matches.
    let witness = construct_extremal(&Construction::GaoLower { k: 2, m, d })
        .ok()
        .filter(|c| c.len() as u64 + 1 == value)
        .map(|c| c.elements);
    Some(ConstantRecord::exact(q, value, witness, vec![TraceStep::new(tag, detail)]))
}

/// `s_2m(d) = 1 + max_j (beta_{2[j,m]}(d) + 2m - 2j)`, each `beta` found by
/// search. The result is exact when the maximizing term is exact and no
/// other term's upper bound can overtake it.
pub fn s_from_beta(m: usize, d: usize, budget: &Budget) -> Result<ConstantRecord> {
    if m == 0 || d == 0 {
        return Err(Error::Precondition("s_from_beta needs m >= 1 and d >= 1".into()));
    }
    let mut memo: HashMap<WeightSet, ConstantRecord> = HashMap::new();
    let mut trace = Vec::new();
    let mut terms = Vec::with_capacity(m);
    for j in 1..=m {
        let w = WeightSet::even_range(j, m).for_sets();
        let rec = match memo.get(&w) {
            Some(r) => r.clone(),
            None => {
                let r = beta_search(&w, d, budget)?;
                trace.push(TraceStep::new(
                    "search",
                    r.headline_as(&Quantity::beta(w.clone(), d).to_string()),
                ));
                if r.trace.iter().any(|t| t.tag == "ledger") {
                    trace.push(TraceStep::new("ledger", format!("bounds for beta_{{{w}}}({d}) completed by the ledger")));
                }
                memo.insert(w.clone(), r.clone());
                r
            }
        };
        let shift = 2 * (m - j) as u64;
        terms.push((j, rec.lower + shift, rec.upper + shift, rec));
    }
    let best = terms
        .iter()
        .max_by_key(|t| (t.1, std::cmp::Reverse(t.0)))
        .expect("m >= 1 gives at least one term");
    let lower = best.1 + 1;
    let upper = terms.iter().map(|t| t.2).max().expect("nonempty") + 1;
    let (j, rec) = (best.0, &best.3);
    trace.push(TraceStep::new(
        "s-from-beta",
        format!("maximizing j = {j}: 1 + beta_{{{}}}({d}) + {}", WeightSet::even_range(j, m), 2 * (m - j)),
    ));
    let witness = rec.witness.as_ref().map(|set| {
        let mut seq = set.clone();
        seq.extend(std::iter::repeat(set[0].clone()).take(2 * (m - j)));
        seq
    });
    let record = ConstantRecord::new(Quantity::S { m, d }, lower, upper, witness, trace);
    record.validate()?;
    Ok(record)
}

/// Best available interval for `s_2m(d)`: a closed form, else the ledger,
/// else a search when the ledger leaves `n` undecided.
fn s_interval(m: usize, d: usize, n: u64, budget: &Budget) -> Result<ConstantRecord> {
    if let Some(r) = closed_form_s(m, d) {
        return Ok(r);
    }
    let ledger = bounds_ledger(&Quantity::S { m, d })?;
    if ledger.lower > n || ledger.upper <= n || d == 0 {
        return Ok(ledger);
    }
    let searched = s_from_beta(m, d, budget)?;
    let lower = searched.lower.max(ledger.lower);
    let upper = searched.upper.min(ledger.upper);
    let mut trace = searched.trace;
    trace.extend(ledger.trace);
    let witness = if lower == searched.lower { searched.witness } else { None };
    Ok(ConstantRecord::new(Quantity::S { m, d }, lower, upper, witness, trace))
}

/// `R_2m(n)`, the least `d` with `s_2m(d) > n`.
pub fn r_from_s(m: usize, n: usize, budget: &Budget) -> Result<ConstantRecord> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    if n + 1 < 2 * m {
        return Err(Error::Precondition(format!("n = {n} is below 2m - 1 = {}", 2 * m - 1)));
    }
    let n64 = n as u64;
    let mut lower: Option<u64> = None;
    let mut trace = Vec::new();
    for d in 0.. {
        let s = s_interval(m, d, n64, budget)?;
        trace.push(TraceStep::new("r-from-s", s.headline()));
        if lower.is_none() && s.upper > n64 {
            lower = Some(d as u64);
        }
        if s.lower > n64 {
            let lower = lower.expect("an interval above n also has its upper above n");
            return Ok(ConstantRecord::new(Quantity::R { m, n }, lower, d as u64, None, trace));
        }
    }
    unreachable!("s_2m(d) >= 2m + d eventually exceeds n")
}

/// The conjectured value of `s_2m(d)`: `2d + 3` for odd `m` with
/// `2m + 1 <= d <= 3m`, and `d + 2m + 1` for even `m` with
/// `2m + 1 <= d <= 3m - 1`. `None` outside those ranges.
#[must_use]
pub fn conjectured_s(m: usize, d: usize) -> Option<u64> {
    let (m64, d64) = (m as u64, d as u64);
    if m == 0 || d < 2 * m + 1 {
        None
    } else if m % 2 == 1 && d <= 3 * m {
        Some(2 * d64 + 3)
    } else if m % 2 == 0 && d < 3 * m {
        Some(d64 + 2 * m64 + 1)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_s(3, 5).unwrap().lower, 11);
        assert_eq!(closed_form_s(3, 7).unwrap().lower, 17);
        assert_eq!(closed_form_s(2, 5).unwrap().lower, 10);
        assert_eq!(closed_form_s(2, 8).unwrap().lower, 21);
        assert!(closed_form_s(2, 11).is_none());
        assert!(closed_form_s(3, 8).is_none());
        let r = closed_form_s(2, 4).unwrap();
        assert!(r.witness.is_some());
        r.validate().unwrap();
    }

    #[test]
    fn s_from_beta_examples() {
        let b = Budget::unlimited();
        assert_eq!(s_from_beta(2, 4, &b).unwrap().value(), Some(9));
        assert_eq!(s_from_beta(1, 2, &b).unwrap().value(), Some(5));
    }

    #[test]
    fn redundancy_examples() {
        let b = Budget::default();
        assert_eq!(r_from_s(2, 9, &b).unwrap().value(), Some(5));
        assert_eq!(r_from_s(2, 8, &b).unwrap().value(), Some(4));
        assert_eq!(r_from_s(3, 7, &b).unwrap().value(), Some(2));
        assert!(r_from_s(3, 4, &b).is_err());
    }

    #[test]
    fn conjecture_ranges() {
        assert_eq!(conjectured_s(1, 3), Some(9));
        assert_eq!(conjectured_s(1, 4), None);
        assert_eq!(conjectured_s(3, 9), Some(21));
        assert_eq!(conjectured_s(2, 5), Some(10));
        assert_eq!(conjectured_s(2, 6), None);
        assert_eq!(conjectured_s(4, 11), Some(20));
        assert_eq!(conjectured_s(2, 4), None);
    }
}
