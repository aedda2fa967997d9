//! Exhaustive searches: maximum sets avoiding zero-sum sizes, and the
//! direct sequence search used as an independent cross-check.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

use super::dp::{check_dim, SubsetCounter};
use super::ledger::{Ledger, LedgerConfig};
use super::record::{ConstantRecord, Quantity, TraceStep};
use super::weights::WeightSet;

/// Node and wall-clock limits for a search.
///
/// The node limit applies to each independent subtree task, so whether a
/// search completes does not depend on thread scheduling. The clock is a
/// global safety net.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    #[must_use]
    pub fn unlimited() -> Self {
        Self {
            max_nodes: None,
            max_time: None,
        }
    }

    #[must_use]
    pub fn nodes(n: u64) -> Self {
        Self {
            max_nodes: Some(n),
            max_time: None,
        }
    }

    #[must_use]
    pub fn with_time(mut self, t: Duration) -> Self {
        self.max_time = Some(t);
        self
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: Some(2_000_000_000),
            max_time: Some(Duration::from_secs(300)),
        }
    }
}

/// Largest dimension for the set search.
pub const MAX_SEARCH_DIM: usize = 16;

enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    Aborted,
}

struct Space {
    d: usize,
    /// Forbidden sizes, each at least 3 and at most `2^d`.
    sizes: Vec<usize>,
    max_counter: usize,
    order: Vec<usize>,
    rank: Vec<usize>,
    forced: Vec<usize>,
    exclude_zero: bool,
}

impl Space {
    fn new(weights: &WeightSet, d: usize) -> Self {
        let group = 1usize << d;
        let w = weights.for_sets();
        let exclude_zero = w.contains(1);
        let sizes: Vec<usize> = w.sizes().iter().copied().filter(|&s| s >= 3 && s <= group).collect();
        let fix_zero = !exclude_zero && sizes.iter().all(|s| s % 2 == 0);
        let mut order: Vec<usize> = (0..group).collect();
        order.sort_by_key(|&v| (v.count_ones(), v));
        let mut rank = vec![0; group];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut forced = Vec::new();
        if fix_zero {
            forced.push(0);
        }
        forced.extend((0..d).map(|i| 1usize << i));
        let max_counter = sizes.iter().max().map_or(0, |s| s - 1);
        Self {
            d,
            sizes,
            max_counter,
            order,
            rank,
            forced,
            exclude_zero,
        }
    }

    fn legal(&self, c: &SubsetCounter, v: usize) -> bool {
        self.sizes.iter().all(|&s| c.count(s - 1, v) == 0)
    }

    fn base_counter(&self) -> SubsetCounter {
        let mut c = SubsetCounter::new(self.d, self.max_counter);
        for &f in &self.forced {
            c.add(f);
        }
        c
    }

    /// Elements after `v` in search order that may still be added.
    fn candidates_after(&self, c: &SubsetCounter, chosen: &[usize], v: Option<usize>) -> Vec<usize> {
        let start = v.map_or(0, |v| self.rank[v] + 1);
        self.order[start..]
            .iter()
            .copied()
            .filter(|&u| !(u == 0 && self.exclude_zero) && !chosen.contains(&u) && self.legal(c, u))
            .collect()
    }

    /// Choices for the first element beyond the forced ones. A coordinate
    /// permutation fixing the forced elements moves the lightest extra
    /// element onto `2^w - 1`.
    fn roots(&self, c: &SubsetCounter) -> Vec<usize> {
        self.candidates_after(c, &self.forced, None)
            .into_iter()
            .filter(|&u| (u + 1).is_power_of_two())
            .collect()
    }

    fn greedy(&self) -> Vec<usize> {
        let mut c = self.base_counter();
        let mut set = self.forced.clone();
        for &u in &self.order {
            if !(u == 0 && self.exclude_zero) && !set.contains(&u) && self.legal(&c, u) {
                c.add(u);
                set.push(u);
            }
        }
        set
    }
}

struct Worker<'a> {
    space: &'a Space,
    counter: SubsetCounter,
    stack: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    abort: &'a AtomicBool,
}

impl Worker<'_> {
    fn dfs(&mut self, cands: &[usize], target: usize) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Outcome::Aborted;
        }
        if self.nodes & 0xFFF == 0 {
            if self.abort.load(Ordering::Relaxed) {
                return Outcome::Aborted;
            }
            if self.deadline.is_some_and(|t| Instant::now() >= t) {
                self.abort.store(true, Ordering::Relaxed);
                return Outcome::Aborted;
            }
        }
        let size = self.stack.len();
        if size >= target {
            return Outcome::Found(self.stack.clone());
        }
        if size + cands.len() < target {
            return Outcome::Exhausted;
        }
        for i in 0..cands.len() {
            if size + cands.len() - i < target {
                break;
            }
            let v = cands[i];
            self.counter.add(v);
            self.stack.push(v);
            let next: Vec<usize> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&u| self.space.legal(&self.counter, u))
                .collect();
            let out = self.dfs(&next, target);
            self.stack.pop();
            self.counter.remove(v);
            if !matches!(out, Outcome::Exhausted) {
                return out;
            }
        }
        Outcome::Exhausted
    }
}

/// Whether some admissible set reaches `target` elements.
fn decide(space: &Space, target: usize, budget: &Budget, start: Instant) -> Outcome {
    if target <= space.forced.len() {
        return Outcome::Found(space.forced.clone());
    }
    let base = space.base_counter();
    let mut tasks: Vec<Vec<usize>> = Vec::new();
    for r in space.roots(&base) {
        if target == space.forced.len() + 1 {
            tasks.push(vec![r]);
            continue;
        }
        let mut c = base.clone();
        c.add(r);
        let mut chosen = space.forced.clone();
        chosen.push(r);
        for s in space.candidates_after(&c, &chosen, Some(r)) {
            tasks.push(vec![r, s]);
        }
    }
    let abort = AtomicBool::new(false);
    let aborted_task = AtomicBool::new(false);
    let deadline = budget.max_time.map(|t| start + t);
    let found = tasks.par_iter().find_map_first(|prefix| {
        let mut counter = base.clone();
        let mut stack = space.forced.clone();
        for &p in prefix {
            counter.add(p);
            stack.push(p);
        }
        let cands = space.candidates_after(&counter, &stack, prefix.last().copied());
        let mut worker = Worker {
            space,
            counter,
            stack,
            nodes: 0,
            max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
            deadline,
            abort: &abort,
        };
        match worker.dfs(&cands, target) {
            Outcome::Found(set) => Some(set),
            Outcome::Aborted => {
                aborted_task.store(true, Ordering::Relaxed);
                None
            }
            Outcome::Exhausted => None,
        }
    });
    match found {
        Some(set) => Outcome::Found(set),
        None if aborted_task.load(Ordering::Relaxed) => Outcome::Aborted,
        None => Outcome::Exhausted,
    }
}

fn to_vectors(d: usize, set: &[usize]) -> Vec<BitVector> {
    set.iter().map(|&v| BitVector::from_u64(d, v as u64)).collect()
}

/// Largest set in `Z_2^d` with no zero-sum subset whose size lies in `W`.
///
/// Runs "is there an admissible set of size T" for increasing `T`, starting
/// above a greedy solution. When the budget runs out the record is bounded,
/// with the best set found and the ledger's upper bound.
pub fn beta_search(weights: &WeightSet, d: usize, budget: &Budget) -> Result<ConstantRecord> {
    if d == 0 {
        return Err(Error::Precondition("beta_search needs d >= 1".into()));
    }
    if d > MAX_SEARCH_DIM {
        return Err(Error::Guard {
            what: "search dimension",
            value: d,
            limit: MAX_SEARCH_DIM,
        });
    }
    check_dim(d)?;
    let quantity = Quantity::beta(weights.clone(), d);
    let space = Space::new(weights, d);
    let group = 1usize << d;
    let trivial = group - usize::from(space.exclude_zero);
    if space.sizes.is_empty() {
        let set: Vec<usize> = (usize::from(space.exclude_zero)..group).collect();
        return Ok(ConstantRecord::exact(
            quantity,
            trivial as u64,
            Some(to_vectors(d, &set)),
            vec![TraceStep::new("search", "no forbidden size can occur; the whole group is admissible")],
        ));
    }
    let start = Instant::now();
    let mut best = space.greedy();
    let mut trace = vec![TraceStep::new("search", format!("greedy set of size {}", best.len()))];
    let mut exact = best.len() >= trivial;
    while !exact {
        let target = best.len() + 1;
        match decide(&space, target, budget, start) {
            Outcome::Found(set) => best = set,
            Outcome::Exhausted => {
                trace.push(TraceStep::new("search", format!("no admissible set of size {target}")));
                exact = true;
            }
            Outcome::Aborted => {
                trace.push(TraceStep::new("search", format!("budget exhausted deciding size {target}")));
                break;
            }
        }
        if best.len() >= trivial {
            exact = true;
        }
    }
    let witness = Some(to_vectors(d, &best));
    let lower = best.len() as u64;
    let record = if exact {
        ConstantRecord::exact(quantity, lower, witness, trace)
    } else {
        // Tabulated code lengths stay out, so a search result never rests
        // on external data.
        let ledger = Ledger::new(LedgerConfig { use_tables: false }).evaluate(&quantity)?;
        let upper = ledger.upper.min(trivial as u64).max(lower);
        trace.push(TraceStep::new("ledger", format!("upper bound {upper} from the inequalities")));
        trace.extend(ledger.trace);
        ConstantRecord::new(quantity, lower, upper, witness, trace)
    };
    record.validate()?;
    Ok(record)
}

/// Guard for the direct multiset search.
pub const DIRECT_MAX_DIM: usize = 4;
pub const DIRECT_MAX_M: usize = 3;

/// `s_2m(d)` by exhaustive search over sequences with no zero-sum
/// subsequence of length `2m`.
///
/// Sequences are enumerated as multisets in nondecreasing order. A
/// translation moves the most frequent element to zero, so zero comes
/// first and no other element is more frequent.
pub fn s_direct_small(m: usize, d: usize) -> Result<ConstantRecord> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    if d > DIRECT_MAX_DIM {
        return Err(Error::Guard {
            what: "direct search dimension",
            value: d,
            limit: DIRECT_MAX_DIM,
        });
    }
    if m > DIRECT_MAX_M {
        return Err(Error::Guard {
            what: "direct search m",
            value: m,
            limit: DIRECT_MAX_M,
        });
    }
    struct State {
        group: usize,
        forbidden: usize,
        counter: SubsetCounter,
        seq: Vec<usize>,
        zero_mult: usize,
        best: Vec<usize>,
    }
    fn go(st: &mut State, from: usize, run: usize) {
        if st.seq.len() > st.best.len() {
            st.best = st.seq.clone();
        }
        for v in from..st.group {
            let mult = if st.seq.last() == Some(&v) { run + 1 } else { 1 };
            if v != 0 && mult > st.zero_mult {
                continue;
            }
            if st.counter.count(st.forbidden - 1, v) != 0 {
                continue;
            }
            st.counter.add(v);
            st.seq.push(v);
            if v == 0 {
                st.zero_mult += 1;
            }
            go(st, v, mult);
            if v == 0 {
                st.zero_mult -= 1;
            }
            st.seq.pop();
            st.counter.remove(v);
            if st.seq.is_empty() {
                // The sequence starts with zero.
                break;
            }
        }
    }
    let mut st = State {
        group: 1 << d,
        forbidden: 2 * m,
        counter: SubsetCounter::new(d, 2 * m - 1),
        seq: Vec::new(),
        zero_mult: 0,
        best: Vec::new(),
    };
    go(&mut st, 0, 0);
    let len = st.best.len() as u64;
    let record = ConstantRecord::exact(
        Quantity::S { m, d },
        len + 1,
        Some(to_vectors(d, &st.best)),
        vec![TraceStep::new(
            "direct-search",
            format!("longest sequence without a zero-sum subsequence of length {} has length {len}", 2 * m),
        )],
    );
    record.validate()?;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(w: &str, d: usize) -> u64 {
        let r = beta_search(&w.parse().unwrap(), d, &Budget::unlimited()).unwrap();
        assert!(r.is_exact());
        r.lower
    }

    #[test]
    fn documented_beta_values() {
        assert_eq!(beta("4", 2), 3);
        assert_eq!(beta("4", 3), 4);
        assert_eq!(beta("1,2,3,4", 4), 5);
        assert_eq!(beta("2,4", 4), 6);
    }

    #[test]
    fn vacuous_weights_give_the_whole_group() {
        assert_eq!(beta("2", 3), 8);
        assert_eq!(beta("1,2", 3), 7);
        assert_eq!(beta("10", 3), 8);
    }

    #[test]
    fn budget_exhaustion_degrades_to_bounded() {
        let r = beta_search(&WeightSet::single(2), 7, &Budget::nodes(10)).unwrap();
        assert!(!r.is_exact());
        assert!(r.lower <= 12 && r.upper >= 12);
        assert!(r.trace.iter().any(|t| t.tag == "ledger"));
        assert!(r.validate().is_ok());
    }

    #[test]
    fn direct_search_values() {
        assert_eq!(s_direct_small(1, 2).unwrap().lower, 5);
        assert_eq!(s_direct_small(2, 2).unwrap().lower, 6);
        assert_eq!(s_direct_small(2, 3).unwrap().lower, 7);
        assert!(s_direct_small(2, 5).is_err());
        assert!(s_direct_small(4, 2).is_err());
    }
}
