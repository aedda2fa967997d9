//! Randomized property suites.
//!
//! Each suite draws its instances from a ChaCha stream seeded by the caller,
//! so a `(suite, seed, trials)` triple always replays the same instances.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{dual, find_unbalanced_dual_word, verify_macwilliams, weight_distribution, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::witness::{binormal_select, extract_zero_sum, find_type_anomaly, BinormalMatrix, PairProfile};
use crate::zerosum::{closed_form_s, dp_zero_sum_witness, GroupSequence};

/// Failures kept verbatim in a report; the rest are only counted.
const KEPT_FAILURES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    MacWilliams,
    DualWord,
    Digraph { n: usize },
    BetaSmallOne,
    BetaSmallTwo,
    Extractor { m: usize, d: usize },
    Switching,
    SelectUniqueness,
}

impl Suite {
    /// Every suite with the parameters used by default.
    #[must_use]
    pub fn defaults() -> Vec<Suite> {
        let mut all = vec![Suite::MacWilliams, Suite::DualWord];
        all.extend([5, 9, 13].map(|n| Suite::Digraph { n }));
        all.extend([Suite::BetaSmallOne, Suite::BetaSmallTwo]);
        all.extend(EXTRACTOR_CASES.map(|(m, d)| Suite::Extractor { m, d }));
        all.extend([Suite::Switching, Suite::SelectUniqueness]);
        all
    }
}

/// The `(m, d)` pairs with a constructive extractor at threshold length.
pub const EXTRACTOR_CASES: [(usize, usize); 7] = [(1, 2), (2, 4), (2, 5), (3, 6), (3, 7), (4, 8), (4, 9)];

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Suite::MacWilliams => f.write_str("macwilliams"),
            Suite::DualWord => f.write_str("dual-word"),
            Suite::Digraph { n } => write!(f, "lemma-digraph:{n}"),
            Suite::BetaSmallOne => f.write_str("beta-small-1"),
            Suite::BetaSmallTwo => f.write_str("beta-small-2"),
            Suite::Extractor { m, d } => write!(f, "extractor:{m},{d}"),
            Suite::Switching => f.write_str("switching"),
            Suite::SelectUniqueness => f.write_str("select-uniqueness"),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once(':').map_or((s, None), |(a, b)| (a, Some(b)));
        let number = |text: &str| {
            text.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad suite parameter {text:?}: {e}")))
        };
        let suite = match (name, arg) {
            ("macwilliams", None) => Suite::MacWilliams,
            ("dual-word", None) => Suite::DualWord,
            ("lemma-digraph", Some(n)) => Suite::Digraph { n: number(n)? },
            ("beta-small-1", None) => Suite::BetaSmallOne,
            ("beta-small-2", None) => Suite::BetaSmallTwo,
            ("extractor", Some(md)) => {
                let (m, d) = md
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("extractor needs m,d, got {md:?}")))?;
                Suite::Extractor {
                    m: number(m)?,
                    d: number(d)?,
                }
            }
            ("switching", None) => Suite::Switching,
            ("select-uniqueness", None) => Suite::SelectUniqueness,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        };
        Ok(suite)
    }
}

/// Resolves a suite name. Family names without parameters (`lemma-digraph`,
/// `extractor`) expand to their default instances and `all` to every suite.
pub fn expand_suites(name: &str) -> Result<Vec<Suite>> {
    match name {
        "all" => Ok(Suite::defaults()),
        "lemma-digraph" => Ok([5, 9, 13].map(|n| Suite::Digraph { n }).to_vec()),
        "extractor" => Ok(EXTRACTOR_CASES.map(|(m, d)| Suite::Extractor { m, d }).to_vec()),
        other => Ok(vec![other.parse()?]),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    #[must_use]
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} passed (seed {})",
            self.suite, self.passed, self.trials, self.seed
        )
    }
}

/// Runs `trials` instances of `suite`. Instance errors count as failures;
/// only malformed suite parameters are returned as errors.
pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> Result<SuiteReport> {
    let check: fn(&mut ChaCha8Rng, Suite) -> Result<()> = match suite {
        Suite::MacWilliams => macwilliams_instance,
        Suite::DualWord => dual_word_instance,
        Suite::Digraph { n } => {
            if n % 4 != 1 {
                return Err(Error::Precondition(format!("digraph suite needs n = 1 mod 4, got {n}")));
            }
            digraph_instance
        }
        Suite::BetaSmallOne => beta_small_one_instance,
        Suite::BetaSmallTwo => beta_small_two_instance,
        Suite::Extractor { m, d } => {
            if m == 0 || d > 2 * m + 1 {
                return Err(Error::Precondition(format!("no guaranteed length for m = {m}, d = {d}")));
            }
            extractor_instance
        }
        Suite::Switching => switching_instance,
        Suite::SelectUniqueness => select_uniqueness_instance,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport {
        suite,
        seed,
        trials,
        passed: 0,
        failures: Vec::new(),
    };
    for t in 0..trials {
        match check(&mut rng, suite) {
            Ok(()) => report.passed += 1,
            Err(e) => {
                if report.failures.len() < KEPT_FAILURES {
                    report.failures.push(format!("trial {t}: {e}"));
                }
            }
        }
    }
    Ok(report)
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BitMatrix {
    BitMatrix::from_fn(rows, cols, |_, _| rng.gen::<bool>())
}

fn macwilliams_instance(rng: &mut ChaCha8Rng, _: Suite) -> Result<()> {
    let n = rng.gen_range(1..=12);
    let gens = rng.gen_range(0..=n.min(6));
    let g = random_matrix(rng, gens, n);
    let code = LinearCode::from_generators(n, g.row_iter().cloned().collect())?;
    let a = weight_distribution(&code)?;
    let b = weight_distribution(&dual(&code))?;
    if verify_macwilliams(&a, &b, n, code.dimension())? {
        Ok(())
    } else {
        Err(fail(format!("identities fail for n = {n}, k = {}", code.dimension())))
    }
}

/// A parity-check matrix with distinct nonzero columns and no two disjoint
/// column pairs of equal sum, so the code has no words of weight 2 or 4.
fn code_without_two_and_four(rng: &mut ChaCha8Rng, n: usize) -> LinearCode {
    loop {
        let r = rng.gen_range(7..=9);
        let mut pool: Vec<u64> = (1..1u64 << r).collect();
        pool.shuffle(rng);
        let mut cols: Vec<u64> = Vec::with_capacity(n);
        let mut sums = std::collections::HashSet::new();
        for v in pool {
            if cols.len() == n {
                break;
            }
            let new_sums: Vec<u64> = cols.iter().map(|&c| c ^ v).collect();
            if new_sums.iter().all(|s| !sums.contains(s)) {
                sums.extend(new_sums);
                cols.push(v);
            }
        }
        if cols.len() == n {
            let columns: Vec<BitVector> = cols.iter().map(|&c| BitVector::from_u64(r, c)).collect();
            let h = BitMatrix::from_columns(r, &columns).expect("columns have r rows");
            return LinearCode::from_any_parity_check(&h).expect("nonempty parity check");
        }
    }
}

fn dual_word_instance(rng: &mut ChaCha8Rng, _: Suite) -> Result<()> {
    let n = rng.gen_range(10..=14);
    let code = code_without_two_and_four(rng, n);
    let word = find_unbalanced_dual_word(&code)?;
    if !dual(&code).contains(&word) || word.is_zero() {
        return Err(fail("returned word is not a nonzero dual codeword"));
    }
    if (2 * word.weight()).abs_diff(n) < 4 {
        return Err(fail(format!("dual word of weight {} is balanced for n = {n}", word.weight())));
    }
    Ok(())
}

/// A random digraph on `n` vertices where every out-degree is odd.
#[must_use]
pub fn random_odd_digraph(rng: &mut ChaCha8Rng, n: usize) -> PairProfile {
    let mut c = BitMatrix::from_fn(n, n, |i, j| i != j && rng.gen::<bool>());
    for i in 0..n {
        if c.row(i).weight() % 2 == 0 && n > 1 {
            let j = (i + rng.gen_range(1..n)) % n;
            c = c.with_entry(i, j, !c.get(i, j));
        }
    }
    PairProfile::from_matrix(&c).expect("square")
}

fn digraph_instance(rng: &mut ChaCha8Rng, suite: Suite) -> Result<()> {
    let Suite::Digraph { n } = suite else { unreachable!() };
    let c = random_odd_digraph(rng, n);
    let set = find_type_anomaly(&c)?;
    if set.len() + 1 != 2 * c.type_of(&set) {
        return Err(fail(format!("set {set:?} has type {}", c.type_of(&set))));
    }
    Ok(())
}

fn random_set(rng: &mut ChaCha8Rng, d: usize, size: usize) -> Vec<BitVector> {
    let mut all: Vec<u64> = (0..1u64 << d).collect();
    all.shuffle(rng);
    all[..size].iter().map(|&v| BitVector::from_u64(d, v)).collect()
}

fn sum_of(d: usize, set: &[BitVector]) -> BitVector {
    set.iter().fold(BitVector::zeros(d), |acc, v| &acc ^ v)
}

fn zero_sum_of_size(d: usize, set: Vec<BitVector>, size: usize) -> Result<()> {
    let len = set.len();
    let seq = GroupSequence::new(d, set)?;
    match dp_zero_sum_witness(&seq, size)? {
        Some(_) => Ok(()),
        None => Err(fail(format!("set of {len} in dimension {d} has no zero sum of size {size}"))),
    }
}

fn beta_small_one_instance(rng: &mut ChaCha8Rng, _: Suite) -> Result<()> {
    let d = rng.gen_range(1..=6);
    loop {
        let size = rng.gen_range((1 << (d - 1)) + 1..=1 << d);
        let set = random_set(rng, d, size);
        if !sum_of(d, &set).is_zero() {
            return zero_sum_of_size(d, set, size - 2);
        }
    }
}

fn beta_small_two_instance(rng: &mut ChaCha8Rng, _: Suite) -> Result<()> {
    let d = rng.gen_range(2..=6);
    let size = rng.gen_range((1 << (d - 1)) + 2..=1 << d);
    let set = random_set(rng, d, size);
    zero_sum_of_size(d, set, size - 3)
}

fn extractor_instance(rng: &mut ChaCha8Rng, suite: Suite) -> Result<()> {
    let Suite::Extractor { m, d } = suite else { unreachable!() };
    let len = closed_form_s(m, d)
        .ok_or_else(|| fail(format!("no closed form for m = {m}, d = {d}")))?
        .lower as usize;
    let values: Vec<u64> = (0..len).map(|_| rng.gen_range(0..1u64 << d)).collect();
    let seq = GroupSequence::from_u64s(d, &values);
    let w = extract_zero_sum(&seq, m)?;
    w.validate(&seq, 2 * m)?;
    match dp_zero_sum_witness(&seq, 2 * m)? {
        Some(other) => other.validate(&seq, 2 * m),
        None => Err(fail("extractor and dynamic program disagree")),
    }
}

fn switching_instance(rng: &mut ChaCha8Rng, _: Suite) -> Result<()> {
    let n = rng.gen_range(3..=13);
    let c = PairProfile::from_matrix(&random_matrix(rng, n, n))?;
    let i = rng.gen_range(0..n);
    let size = 2 * rng.gen_range(0..n.div_ceil(2)) + 1;
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let mut set = all[..size].to_vec();
    set.sort_unstable();
    let (before, after) = (c.type_of(&set), c.switched(i).type_of(&set));
    if before != after {
        return Err(fail(format!("switching {i} changes the type of {set:?}: {before} -> {after}")));
    }
    Ok(())
}

fn select_uniqueness_instance(rng: &mut ChaCha8Rng, _: Suite) -> Result<()> {
    let k = rng.gen_range(1..=10);
    let cols = 2 * k + rng.gen_range(0..3);
    let mut m = random_matrix(rng, k, cols);
    for j in 0..k {
        for i in 0..k {
            let v = m.get(i, 2 * j);
            m = m.with_entry(i, 2 * j + 1, v ^ (i == j));
        }
    }
    let b = BinormalMatrix::new(m)?;
    let x = BitVector::from_u64(k, rng.gen_range(0..1u64 << k));
    let chosen = binormal_select(&b, &x)?;
    let hits: Vec<u64> = (0..1u64 << k)
        .filter(|mask| {
            let pick: Vec<usize> = (0..k).map(|i| 2 * i + (mask >> i & 1) as usize).collect();
            b.matrix().column_sum(&pick).slice(0..k) == x
        })
        .collect();
    let expected: u64 = chosen.iter().enumerate().map(|(i, &c)| ((c - 2 * i) as u64) << i).sum();
    if hits != [expected] {
        return Err(fail(format!("{} selections reach the target", hits.len())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::defaults() {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert!("extractor:3".parse::<Suite>().is_err());
        assert_eq!(expand_suites("lemma-digraph").unwrap().len(), 3);
        assert_eq!(expand_suites("all").unwrap(), Suite::defaults());
    }

    #[test]
    fn quick_runs_pass() {
        for s in Suite::defaults() {
            let r = run_suite(s, 1, 5).unwrap();
            assert!(r.all_passed(), "{r}: {:?}", r.failures);
        }
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(run_suite(Suite::Digraph { n: 6 }, 1, 1).is_err());
        assert!(run_suite(Suite::Extractor { m: 1, d: 5 }, 1, 1).is_err());
    }

    #[test]
    fn same_seed_same_report() {
        let a = run_suite(Suite::DualWord, 3, 4).unwrap();
        let b = run_suite(Suite::DualWord, 3, 4).unwrap();
        assert_eq!(a, b);
    }
}
