//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed.
//!
//! Criterion 11 is a long search and only runs with `EGZ_STRETCH=1`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use egz::codes::n_table;
use egz::verify::{run_suite, Suite, EXTRACTOR_CASES};
use egz::zerosum::{
    beta_search, closed_form_s, r_from_s, s_direct_small, s_from_beta, Budget, ConstantRecord, WeightSet,
};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn certified_by_search(rec: &ConstantRecord) -> bool {
    rec.is_exact() && rec.trace.iter().all(|t| t.tag != "ledger")
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn s4_table() -> Outcome {
    let expected = [5, 6, 7, 9, 10, 12, 15];
    let mut notes = Vec::new();
    let mut ok = true;
    for (d, want) in (1..=7).zip(expected) {
        let start = Instant::now();
        let rec = match s_from_beta(2, d, &Budget::default()) {
            Ok(r) => r,
            Err(e) => return Outcome::Fail(format!("d = {d}: {e}")),
        };
        let took = start.elapsed();
        let good = rec.value() == Some(want) && certified_by_search(&rec) && took < Duration::from_secs(300);
        ok &= good;
        if !good {
            notes.push(format!("d = {d}: {} in {took:.1?}", rec.headline()));
        }
    }
    let start = Instant::now();
    let eight = match s_from_beta(2, 8, &Budget::default().with_time(Duration::from_secs(7200))) {
        Ok(r) => r,
        Err(e) => return Outcome::Fail(format!("d = 8: {e}")),
    };
    let took = start.elapsed();
    let eight_ok = if eight.is_exact() {
        eight.value() == Some(21) && certified_by_search(&eight)
    } else {
        eight.lower == 21
    };
    ok &= eight_ok;
    notes.push(format!("{} in {took:.1?}", eight.headline()));
    check(ok, format!("s_4(1..7) = 5,6,7,9,10,12,15 by search; {}", notes.join("; ")))
}

fn closed_forms() -> Outcome {
    let (mut total, mut compared) = (0, 0);
    let mut mismatches = Vec::new();
    for m in 1..=4 {
        for d in 1..=2 * m + 1 {
            total += 1;
            let closed = closed_form_s(m, d).expect("closed form covers d <= 2m + 1");
            match s_from_beta(m, d, &Budget::default()) {
                Ok(rec) if rec.is_exact() => {
                    compared += 1;
                    if rec.value() != closed.value() {
                        mismatches.push(format!("s_{}({d}): search {} vs {}", 2 * m, rec.lower, closed.lower));
                    }
                }
                Ok(_) => {}
                Err(e) => mismatches.push(format!("s_{}({d}): {e}", 2 * m)),
            }
        }
    }
    check(
        mismatches.is_empty() && compared == total,
        format!("{compared} of {total} pairs (m <= 4, d <= 2m + 1) compared; mismatches {mismatches:?}"),
    )
}

fn direct_oracle() -> Outcome {
    let pairs = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4)];
    let mut bad = Vec::new();
    for (m, d) in pairs {
        let direct = s_direct_small(m, d);
        let via_beta = s_from_beta(m, d, &Budget::default());
        match (direct, via_beta) {
            (Ok(a), Ok(b)) if a.is_exact() && a.value() == b.value() => {}
            (a, b) => bad.push(format!("({m},{d}): {:?} vs {:?}", a.map(|r| r.headline()), b.map(|r| r.headline()))),
        }
    }
    check(bad.is_empty(), format!("{} pairs agree; disagreements {bad:?}", pairs.len() - bad.len()))
}

fn beta_small_d() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for d in 1..=4u32 {
        for m in 1usize.. {
            let two_m = 2 * m;
            if two_m >= 1 << d {
                break;
            }
            if two_m < 1 << (d - 1) {
                continue;
            }
            count += 1;
            let want = if m + 2 == 1 << (d - 1) { two_m } else { two_m + 2 } as u64;
            match beta_search(&WeightSet::single(m), d as usize, &Budget::default()) {
                Ok(r) if r.value() == Some(want) => {}
                Ok(r) => bad.push(format!("{} (want {want})", r.headline())),
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    check(bad.is_empty(), format!("{count} cases of beta_2m(d), d <= 4; mismatches {bad:?}"))
}

fn code_correspondences() -> Outcome {
    let mut bad = Vec::new();
    for d in 4..=7 {
        let n5 = match n_table(d, 5) {
            Ok(e) if e.is_exact() => e.lower,
            other => return Outcome::Fail(format!("N({d},5) not tabulated exactly: {other:?}")),
        };
        let ones = beta_search(&WeightSet::initial(2), d, &Budget::default());
        let evens = beta_search(&WeightSet::even_range(1, 2), d, &Budget::default());
        match (ones, evens) {
            (Ok(a), Ok(b)) if a.value() == Some(n5) && b.value() == Some(n5 + 1) => {}
            (a, b) => bad.push(format!(
                "d = {d}: N = {n5}, {:?}, {:?}",
                a.map(|r| r.headline()),
                b.map(|r| r.headline())
            )),
        }
    }
    check(bad.is_empty(), format!("beta_{{1..4}}(d) = N(d,5) = 5,6,8,11 and beta_{{2,4}} = N + 1 for d = 4..7; {bad:?}"))
}

/// `R_2m(n)` from the closed formulas and, for `m = 2`, the `s_4` table.
fn expected_r(m: usize, n: usize) -> Option<u64> {
    let (m64, n64) = (m as u64, n as u64);
    if n + 1 >= 2 * m && n < 4 * m {
        return Some(n64 + 1 - 2 * m64);
    }
    if n == 4 * m {
        return Some(2 * m64);
    }
    if n == 4 * m + 1 {
        return Some(2 * m64 + 1);
    }
    if m % 2 == 1 && (4 * m + 2..=4 * m + 4).contains(&n) {
        return Some(2 * m64 + 1);
    }
    if m % 2 == 1 && (4 * m + 5..=4 * m + 6).contains(&n) {
        return Some(2 * m64 + 2);
    }
    if m % 2 == 0 && n == 4 * m + 2 {
        return Some(2 * m64 + 2);
    }
    if m == 2 {
        let s4 = [5u64, 6, 7, 9, 10, 12, 15, 21];
        return s4.iter().position(|&s| s > n64).map(|i| i as u64 + 1);
    }
    None
}

fn r_values() -> Outcome {
    let mut compared = 0;
    let mut bad = Vec::new();
    for m in 1..=3 {
        for n in 2 * m - 1..=4 * m + 6 {
            let Some(want) = expected_r(m, n) else { continue };
            match r_from_s(m, n, &Budget::default()) {
                Ok(r) if r.is_exact() => {
                    compared += 1;
                    if r.value() != Some(want) {
                        bad.push(format!("{} (want {want})", r.headline()));
                    }
                }
                Ok(r) => bad.push(format!("{} not exact", r.headline())),
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    check(bad.is_empty(), format!("{compared} values of R_2m(n), m <= 3, n in [2m-1, 4m+6]; {bad:?}"))
}

fn suites(list: &[(Suite, usize)]) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for &(suite, trials) in list {
        match run_suite(suite, 1, trials) {
            Ok(r) => {
                ok &= r.all_passed();
                parts.push(format!("{}: {}/{}", r.suite, r.passed, r.trials));
                if let Some(f) = r.failures.first() {
                    parts.push(format!("first failure {f}"));
                }
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{suite}: {e}"));
            }
        }
    }
    check(ok, parts.join(", "))
}

fn extractor_totality() -> Outcome {
    let list: Vec<(Suite, usize)> = EXTRACTOR_CASES.iter().map(|&(m, d)| (Suite::Extractor { m, d }, 500)).collect();
    suites(&list)
}

fn stretch() -> Outcome {
    if std::env::var("EGZ_STRETCH").map_or(true, |v| v != "1") {
        return Outcome::Skip("s_8(11) search runs only with EGZ_STRETCH=1".into());
    }
    let start = Instant::now();
    match s_from_beta(4, 11, &Budget::unlimited().with_time(Duration::from_secs(4 * 3600))) {
        Ok(r) => {
            let ok = r.value() == Some(20) && certified_by_search(&r);
            check(ok, format!("{} in {:.1?}", r.headline(), start.elapsed()))
        }
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, &str, bool, fn() -> Outcome)> = vec![
        (1, "s_4 table", true, s4_table),
        (2, "closed forms", true, closed_forms),
        (3, "direct oracle", true, direct_oracle),
        (4, "beta closed form", true, beta_small_d),
        (5, "code correspondences", true, code_correspondences),
        (6, "R values", true, r_values),
        (7, "extractor totality", true, extractor_totality),
        (8, "MacWilliams and dual word", true, || {
            suites(&[(Suite::MacWilliams, 100), (Suite::DualWord, 100)])
        }),
        (9, "digraph lemma", true, || {
            suites(&[5, 9, 13].map(|n| (Suite::Digraph { n }, 1000)))
        }),
        (10, "small-d beta lemmas", true, || {
            suites(&[(Suite::BetaSmallOne, 500), (Suite::BetaSmallTwo, 500)])
        }),
        (11, "stretch s_8(11) = 20", false, stretch),
    ];
    let mut gating_failures = 0;
    for (id, name, gating, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (label, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                if gating {
                    gating_failures += 1;
                }
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("criterion {id:>2} [{label}] {name} ({took:.1?}): {detail}");
    }
    if gating_failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{gating_failures} gating criteria failed");
        ExitCode::FAILURE
    }
}
