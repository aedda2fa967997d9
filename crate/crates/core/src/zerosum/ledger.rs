//! Interval bookkeeping for every tracked constant.
//!
//! Each known inequality between the constants is a rule. The ledger
//! instantiates the rules over a finite universe of quantities around the
//! query, iterates them to a fixed point, and reports the query's interval
//! with the chain of steps that produced each end.

use std::collections::{BTreeMap, HashSet};

use crate::codes::{hamming_max_length, n_table};
use crate::error::{Error, Result};
use crate::gf2::BitVector;

use super::record::{ConstantRecord, Quantity, TraceStep};
use super::weights::{WeightSet, WeightShape};

/// Largest dimension the ledger instantiates.
pub const MAX_LEDGER_DIM: usize = 60;
const MAX_ROUNDS: usize = 100;

#[derive(Clone, Debug)]
struct Step {
    tag: &'static str,
    detail: String,
    deps: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
struct Interval {
    lo: u64,
    lo_step: Option<usize>,
    hi: u64,
    hi_step: Option<usize>,
}

impl Default for Interval {
    fn default() -> Self {
        Self {
            lo: 0,
            lo_step: None,
            hi: u64::MAX,
            hi_step: None,
        }
    }
}

/// Canonical key: beta weights are normalized for sets.
fn key(q: &Quantity) -> Quantity {
    match q {
        Quantity::Beta { weights, d } => Quantity::Beta {
            weights: weights.for_sets(),
            d: *d,
        },
        other => other.clone(),
    }
}

fn s(m: usize, d: usize) -> Quantity {
    Quantity::S { m, d }
}
fn single(m: usize, d: usize) -> Quantity {
    key(&Quantity::beta(WeightSet::single(m), d))
}
fn even_range(j: usize, m: usize, d: usize) -> Quantity {
    key(&Quantity::beta(WeightSet::even_range(j, m), d))
}
fn initial(m: usize, d: usize) -> Quantity {
    key(&Quantity::beta(WeightSet::initial(m), d))
}
fn code(r: usize, delta: usize) -> Quantity {
    Quantity::N { r, delta }
}

/// Which inputs the ledger may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LedgerConfig {
    /// Use the tabulated values of `N(r, 5)`.
    pub use_tables: bool,
}

impl Default for LedgerConfig {
    fn default() -> Self {
        Self { use_tables: true }
    }
}

pub struct Ledger {
    config: LedgerConfig,
    bounds: BTreeMap<Quantity, Interval>,
    steps: Vec<Step>,
    facts: Vec<ConstantRecord>,
    family: (usize, usize),
    changed: bool,
}

impl Ledger {
    #[must_use]
    pub fn new(config: LedgerConfig) -> Self {
        Self {
            config,
            bounds: BTreeMap::new(),
            steps: Vec::new(),
            facts: Vec::new(),
            family: (0, 0),
            changed: false,
        }
    }

    /// Adds an externally established record (a cached value or a search
    /// result). Its interval enters the fixed point under the tag `cache`
    /// or `search`.
    pub fn add_fact(&mut self, record: ConstantRecord) {
        self.facts.push(record);
    }

    fn get(&self, q: &Quantity) -> Interval {
        self.bounds.get(q).copied().unwrap_or_default()
    }

    fn lo(&self, q: &Quantity) -> u64 {
        self.get(q).lo
    }

    fn hi(&self, q: &Quantity) -> u64 {
        self.get(q).hi
    }

    fn dep_lo(&self, q: &Quantity) -> Option<usize> {
        self.get(q).lo_step
    }

    fn dep_hi(&self, q: &Quantity) -> Option<usize> {
        self.get(q).hi_step
    }

    fn push_step(&mut self, tag: &'static str, detail: String, deps: &[Option<usize>]) -> usize {
        self.steps.push(Step {
            tag,
            detail,
            deps: deps.iter().flatten().copied().collect(),
        });
        self.steps.len() - 1
    }

    fn describe(&self, step: Option<usize>) -> String {
        step.map_or_else(|| "none".to_string(), |i| format!("{}: {}", self.steps[i].tag, self.steps[i].detail))
    }

    fn check(&self, q: &Quantity) -> Result<()> {
        let iv = self.get(q);
        if iv.lo > iv.hi {
            return Err(Error::Inconsistent {
                quantity: q.to_string(),
                lower: iv.lo,
                lower_step: self.describe(iv.lo_step),
                upper: iv.hi,
                upper_step: self.describe(iv.hi_step),
            });
        }
        Ok(())
    }

    fn at_least(&mut self, q: &Quantity, value: u64, tag: &'static str, deps: &[Option<usize>]) -> Result<()> {
        let Some(iv) = self.bounds.get(q) else {
            return Ok(());
        };
        if value <= iv.lo {
            return Ok(());
        }
        let step = self.push_step(tag, format!("{q} >= {value}"), deps);
        let iv = self.bounds.get_mut(q).expect("present");
        iv.lo = value;
        iv.lo_step = Some(step);
        self.changed = true;
        self.check(q)
    }

    fn at_most(&mut self, q: &Quantity, value: u64, tag: &'static str, deps: &[Option<usize>]) -> Result<()> {
        let Some(iv) = self.bounds.get(q) else {
            return Ok(());
        };
        if value >= iv.hi {
            return Ok(());
        }
        let step = self.push_step(tag, format!("{q} <= {value}"), deps);
        let iv = self.bounds.get_mut(q).expect("present");
        iv.hi = value;
        iv.hi_step = Some(step);
        self.changed = true;
        self.check(q)
    }

    fn exactly(&mut self, q: &Quantity, value: u64, tag: &'static str, deps: &[Option<usize>]) -> Result<()> {
        self.at_least(q, value, tag, deps)?;
        self.at_most(q, value, tag, deps)
    }

    fn has(&self, q: &Quantity) -> bool {
        self.bounds.contains_key(q)
    }

    fn insert(&mut self, q: Quantity) {
        self.bounds.entry(q).or_default();
    }

    fn build_universe(&mut self, query: &Quantity) -> Result<()> {
        let (m_max, d_max) = match query {
            Quantity::S { m, d } => (*m, *d),
            Quantity::Beta { weights, d } => ((weights.max() + 1) / 2, *d),
            Quantity::N { r, delta } => ((delta.saturating_sub(1)) / 2, *r),
            Quantity::R { m, n } => (*m, n.saturating_sub(2 * m) + 2),
        };
        if d_max > MAX_LEDGER_DIM {
            return Err(Error::Guard {
                what: "ledger dimension",
                value: d_max,
                limit: MAX_LEDGER_DIM,
            });
        }
        if let Quantity::N { delta, .. } = query {
            if *delta < 3 {
                return Err(Error::Precondition(format!("distance {delta} is below 3")));
            }
        }
        if let Quantity::S { m: 0, .. } | Quantity::R { m: 0, .. } = query {
            return Err(Error::Precondition("m must be positive".into()));
        }
        self.family = (m_max, d_max);
        for m in 1..=m_max {
            for d in 0..=d_max {
                self.insert(s(m, d));
                self.insert(single(m, d));
                for j in 1..=m {
                    self.insert(even_range(j, m, d));
                }
                self.insert(initial(m, d));
                self.insert(code(d, 2 * m + 1));
            }
        }
        match query {
            Quantity::Beta { weights, d } => {
                for dd in 0..=*d {
                    self.insert(key(&Quantity::beta(weights.clone(), dd)));
                }
            }
            Quantity::N { r, delta } => {
                for rr in 0..=*r {
                    self.insert(code(rr, *delta));
                }
            }
            other => self.insert(other.clone()),
        }
        for f in &self.facts.clone() {
            let k = key(&f.quantity);
            if let Quantity::N { delta, .. } = k {
                if delta < 3 {
                    continue;
                }
            }
            if k.witness_dim().unwrap_or(0) <= MAX_LEDGER_DIM {
                self.insert(k);
            }
        }
        Ok(())
    }

    fn apply_facts(&mut self) -> Result<()> {
        for f in self.facts.clone() {
            let k = key(&f.quantity);
            let tag = if f.trace.iter().any(|t| t.tag == "cache") { "cache" } else { "search" };
            self.at_least(&k, f.lower, tag, &[])?;
            self.at_most(&k, f.upper, tag, &[])?;
        }
        Ok(())
    }

    fn beta_rules(&mut self, q: &Quantity) -> Result<()> {
        let Quantity::Beta { weights, d } = q else {
            return Ok(());
        };
        let d = *d;
        let group = 1u64 << d;
        let no_zero = weights.contains(1);
        let cap = group - u64::from(no_zero);
        let effective: Vec<u64> = weights
            .sizes()
            .iter()
            .map(|&w| w as u64)
            .filter(|&w| w >= 3 && w <= group)
            .collect();
        if effective.is_empty() {
            let tag = if weights.contains(2) { "pairs-vacuous" } else { "beta-whole-group" };
            return self.exactly(q, cap, tag, &[]);
        }
        self.at_most(q, cap, "trivial-size", &[])?;
        self.at_least(q, cap.min(effective[0] - 1), "trivial-size", &[])?;
        self.at_least(q, cap.min(d as u64 + u64::from(!no_zero)), "basis-lower", &[])?;
        if let Some(WeightShape::Single { m }) = weights.shape() {
            let two_m = 2 * m as u64;
            if two_m == group {
                self.exactly(q, group - 1, "beta-whole-group", &[])?;
            } else if d >= 1 && group / 2 <= two_m && two_m < group {
                let value = if two_m + 4 == group { two_m } else { two_m + 2 };
                self.exactly(q, value, "beta-dense-closed-form", &[])?;
            }
        }
        if d >= 1 {
            let below = Quantity::Beta {
                weights: weights.clone(),
                d: d - 1,
            };
            if self.has(&below) {
                let lo = self.lo(&below);
                self.at_least(q, lo + 1, "lift", &[self.dep_lo(&below)])?;
                let hi = self.hi(q);
                if hi != u64::MAX {
                    self.at_most(&below, hi.saturating_sub(1), "monotone-dimension", &[self.dep_hi(q)])?;
                }
            }
        }
        // Enlarging W can only shrink the maximum.
        let wider: Vec<Quantity> = self
            .bounds
            .keys()
            .filter(|k| match k {
                Quantity::Beta { weights: w2, d: d2 } => {
                    *d2 == d && w2 != weights && weights.sizes().iter().all(|x| w2.contains(*x))
                }
                _ => false,
            })
            .cloned()
            .collect();
        for w in wider {
            let hi = self.hi(q);
            self.at_most(&w, hi, "weight-monotone", &[self.dep_hi(q)])?;
            let lo = self.lo(&w);
            self.at_least(q, lo, "weight-monotone", &[self.dep_lo(&w)])?;
        }
        Ok(())
    }

    fn code_rules(&mut self, q: &Quantity) -> Result<()> {
        let Quantity::N { r, delta } = *q else {
            return Ok(());
        };
        let full = if r >= 64 { u64::MAX } else { (1u64 << r) - 1 };
        self.at_most(q, full, "trivial-size", &[])?;
        self.at_least(q, r as u64, "basis-lower", &[])?;
        if delta == 3 {
            self.exactly(q, full, "n-distance-3", &[])?;
        }
        if delta == 5 && self.config.use_tables {
            if let Ok(e) = n_table(r, 5) {
                self.at_least(q, e.lower, "n-table", &[])?;
                self.at_most(q, e.upper, "n-table", &[])?;
            }
        }
        if delta % 2 == 1 {
            let t = (delta - 1) / 2;
            if t >= 2 && r % t == 0 && r / t <= 62 {
                self.at_least(q, (1u64 << (r / t)) - 1, "bch", &[])?;
            }
            self.at_most(q, hamming_max_length(r, t), "hamming", &[])?;
        }
        if r >= 1 {
            let below = code(r - 1, delta);
            if self.has(&below) {
                let lo = self.lo(&below);
                self.at_least(q, lo + 1, "n-extend", &[self.dep_lo(&below)])?;
                let hi = self.hi(q);
                if hi != u64::MAX {
                    self.at_most(&below, hi.saturating_sub(1), "n-extend", &[self.dep_hi(q)])?;
                }
            }
        }
        Ok(())
    }

    fn redundancy_rules(&mut self, q: &Quantity) -> Result<()> {
        let Quantity::R { m, n } = *q else {
            return Ok(());
        };
        self.at_most(q, n as u64, "trivial-size", &[])?;
        // R_2m(n) is the least d with s_2m(d) > n.
        let mut deps = Vec::new();
        let mut lower_found = false;
        for d in 0..=self.family.1 {
            let sq = s(m, d);
            if !self.has(&sq) {
                break;
            }
            if !lower_found {
                if self.hi(&sq) > n as u64 {
                    self.at_least(q, d as u64, "r-from-s", &deps)?;
                    lower_found = true;
                } else {
                    deps.push(self.dep_hi(&sq));
                }
            }
            if self.lo(&sq) > n as u64 {
                self.at_most(q, d as u64, "r-from-s", &[self.dep_lo(&sq)])?;
                break;
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_lines)]
    fn family_rules(&mut self, m: usize, d: usize) -> Result<()> {
        let (mu, du) = (m as u64, d as u64);
        let sq = s(m, d);
        let b1 = single(m, d);
        let bi = initial(m, d);
        let be1 = even_range(1, m, d);
        let nn = code(d, 2 * m + 1);

        if d == 0 {
            self.exactly(&sq, 2 * mu, "trivial-size", &[])?;
        }
        self.at_least(&sq, 2 * mu + du, "gao-lower", &[])?;
        if d >= 2 * m {
            self.at_least(&sq, 2 * mu + du + 1, "gao-lower-ones", &[])?;
        }
        if d < 2 * m {
            self.exactly(&sq, 2 * mu + du, "s-small-d", &[])?;
        } else if d == 2 * m {
            self.exactly(&sq, 4 * mu + 1, "s-d-eq-2m", &[])?;
        } else if d == 2 * m + 1 {
            if m % 2 == 1 {
                self.exactly(&sq, 4 * mu + 5, "s-d-eq-2m+1-odd", &[])?;
            } else {
                self.exactly(&sq, 4 * mu + 2, "s-d-eq-2m+1-even", &[])?;
            }
        }
        if d >= 1 {
            let below = s(m, d - 1);
            let lo = self.lo(&below);
            self.at_least(&sq, lo + 1, "lift", &[self.dep_lo(&below)])?;
            let hi = self.hi(&sq);
            if hi != u64::MAX {
                self.at_most(&below, hi - 1, "monotone-dimension", &[self.dep_hi(&sq)])?;
            }
        }

        // Sandwich between beta_2m and the sequence constant.
        let lo = self.lo(&b1);
        self.at_least(&sq, lo + 1, "beta-sandwich", &[self.dep_lo(&b1)])?;
        let hi = self.hi(&b1);
        self.at_most(&sq, hi.saturating_add(2 * mu - 1), "beta-sandwich", &[self.dep_hi(&b1)])?;
        let lo = self.lo(&sq);
        self.at_least(&b1, lo.saturating_sub(2 * mu - 1), "beta-sandwich", &[self.dep_lo(&sq)])?;
        let hi = self.hi(&sq);
        self.at_most(&b1, hi.saturating_sub(1), "beta-sandwich", &[self.dep_hi(&sq)])?;

        // s = 1 + max_j (beta_{2[j,m]} + 2m - 2j).
        let terms: Vec<(Quantity, u64)> = (1..=m).map(|j| (even_range(j, m, d), 2 * (mu - j as u64))).collect();
        let (mut best_lo, mut lo_dep) = (0u64, None);
        let (mut best_hi, mut hi_deps) = (0u64, Vec::new());
        for (b, shift) in &terms {
            let l = self.lo(b) + shift;
            if l > best_lo {
                best_lo = l;
                lo_dep = self.dep_lo(b);
            }
            best_hi = best_hi.max(self.hi(b).saturating_add(*shift));
            hi_deps.push(self.dep_hi(b));
        }
        self.at_least(&sq, best_lo + 1, "s-from-beta", &[lo_dep])?;
        self.at_most(&sq, best_hi.saturating_add(1), "s-from-beta", &hi_deps)?;
        let hi = self.hi(&sq);
        if hi != u64::MAX {
            for (b, shift) in &terms {
                self.at_most(b, (hi - 1).saturating_sub(*shift), "s-from-beta", &[self.dep_hi(&sq)])?;
            }
        }

        if m == 2 {
            let lo = self.lo(&nn);
            self.at_least(&sq, lo + 4, "s4-from-n5", &[self.dep_lo(&nn)])?;
            let hi = self.hi(&nn);
            self.at_most(&sq, hi.saturating_add(4), "s4-from-n5", &[self.dep_hi(&nn)])?;
            let lo = self.lo(&sq);
            self.at_least(&nn, lo.saturating_sub(4), "s4-from-n5", &[self.dep_lo(&sq)])?;
            let hi = self.hi(&sq);
            self.at_most(&nn, hi.saturating_sub(4), "s4-from-n5", &[self.dep_hi(&sq)])?;
        }
        if m == 3 && d >= 3 {
            self.tie(&sq, &b1, 1, "s6-from-beta6")?;
        }
        if m >= 3 && m % 2 == 1 && d + 3 >= 2 * m && d <= 2 * m + 1 {
            self.tie(&sq, &b1, 1, "beta-equals-s-odd")?;
        }
        if m >= 2 {
            let prev = s(m - 1, d);
            if self.has(&prev) && self.hi(&prev) != u64::MAX && self.lo(&sq) >= self.hi(&prev) + 3 {
                let lo = self.lo(&sq);
                self.at_least(&b1, lo - 1, "repeat-removal", &[self.dep_lo(&sq), self.dep_hi(&prev)])?;
            }
        }

        // Sets versus codes.
        self.tie(&bi, &nn, 0, "code-length")?;
        self.tie(&be1, &bi, 1, "zero-adjoin")?;
        if d >= 2 * m {
            self.at_least(&bi, du + 1, "basis-plus-ones", &[])?;
        }
        if d >= 3 * m {
            self.at_least(&bi, du + 2, "two-heavy", &[])?;
        }

        if m % 2 == 1 && d >= 1 {
            let half = even_range(1, m, d - 1);
            let lo = self.lo(&half);
            self.at_least(&b1, 2 * lo, "doubling", &[self.dep_lo(&half)])?;
            let mut b = m as u64 + 1;
            while b <= lo {
                if b % 2 == 0 && (b - mu) as usize <= self.family.0 {
                    let target = single((b - mu) as usize, d);
                    self.at_least(&target, 2 * b, "doubling-corollary", &[self.dep_lo(&half)])?;
                }
                b += 1;
            }
            if d > 2 * m {
                self.at_least(&b1, 2 * du + 2, "odd-doubling-lower", &[])?;
            }
            if d > 3 * m {
                self.at_least(&b1, 2 * du + 4, "odd-doubling-lower", &[])?;
            }
        }
        if m >= 2 && d >= 1 {
            let half = even_range(1, m, d - 1);
            let hi = self.hi(&half);
            if hi != u64::MAX {
                let bound = 9u64.max((2 * hi).saturating_sub(4));
                self.at_most(&be1, bound, "halving", &[self.dep_hi(&half)])?;
            }
        }
        Ok(())
    }

    /// `a = b + offset`, propagated in both directions.
    fn tie(&mut self, a: &Quantity, b: &Quantity, offset: u64, tag: &'static str) -> Result<()> {
        let lo = self.lo(b);
        self.at_least(a, lo + offset, tag, &[self.dep_lo(b)])?;
        let hi = self.hi(b);
        self.at_most(a, hi.saturating_add(offset), tag, &[self.dep_hi(b)])?;
        let lo = self.lo(a);
        self.at_least(b, lo.saturating_sub(offset), tag, &[self.dep_lo(a)])?;
        let hi = self.hi(a);
        if hi != u64::MAX {
            self.at_most(b, hi.saturating_sub(offset), tag, &[self.dep_hi(a)])?;
        }
        Ok(())
    }

    fn round(&mut self) -> Result<()> {
        let keys: Vec<Quantity> = self.bounds.keys().cloned().collect();
        for q in &keys {
            self.beta_rules(q)?;
            self.code_rules(q)?;
        }
        let (m_max, d_max) = self.family;
        for m in 1..=m_max {
            for d in 0..=d_max {
                self.family_rules(m, d)?;
            }
        }
        for q in &keys {
            self.redundancy_rules(q)?;
        }
        Ok(())
    }

    fn trace(&self, roots: &[Option<usize>]) -> Vec<TraceStep> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        fn visit(l: &Ledger, i: usize, seen: &mut HashSet<usize>, out: &mut Vec<TraceStep>) {
            if !seen.insert(i) {
                return;
            }
            for &dep in &l.steps[i].deps {
                visit(l, dep, seen, out);
            }
            out.push(TraceStep::new(l.steps[i].tag, l.steps[i].detail.clone()));
        }
        for i in roots.iter().flatten() {
            visit(self, *i, &mut seen, &mut out);
        }
        out
    }

    /// Runs the fixed point and reports `query`.
    pub fn evaluate(mut self, query: &Quantity) -> Result<ConstantRecord> {
        self.build_universe(query)?;
        self.apply_facts()?;
        for _ in 0..MAX_ROUNDS {
            self.changed = false;
            self.round()?;
            if !self.changed {
                break;
            }
        }
        let k = key(query);
        let iv = self.get(&k);
        let witness: Option<Vec<BitVector>> = self
            .facts
            .iter()
            .find(|f| key(&f.quantity) == k && f.lower == iv.lo && f.witness.is_some())
            .and_then(|f| f.witness.clone());
        let trace = self.trace(&[iv.lo_step, iv.hi_step]);
        Ok(ConstantRecord::new(query.clone(), iv.lo, iv.hi.max(iv.lo), witness, trace))
    }
}

/// Best known interval for `query` from the inequalities alone.
pub fn bounds_ledger(query: &Quantity) -> Result<ConstantRecord> {
    Ledger::new(LedgerConfig::default()).evaluate(query)
}

/// As [`bounds_ledger`], also trusting the given records.
pub fn bounds_ledger_with(query: &Quantity, facts: &[ConstantRecord], config: LedgerConfig) -> Result<ConstantRecord> {
    let mut l = Ledger::new(config);
    for f in facts {
        l.add_fact(f.clone());
    }
    l.evaluate(query)
}
