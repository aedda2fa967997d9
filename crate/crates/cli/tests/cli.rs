use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn egz(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egz"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn headlines() {
    let dir = tempfile::tempdir().unwrap();
    for (args, headline) in [
        (&["--no-cache", "s-const", "-m", "2", "-d", "4"][..], "s_4(4) = 9 (exact)"),
        (&["--no-cache", "r-const", "-m", "2", "-n", "8"][..], "R_4(8) = 4 (exact)"),
        (&["--no-cache", "beta", "-W", "4", "-d", "2"][..], "beta = 3 (exact)"),
    ] {
        let o = egz(dir.path(), args);
        assert!(o.status.success(), "{args:?}");
        assert_eq!(stdout(&o).lines().next(), Some(headline));
    }
}

#[test]
fn s_const_reports_agreement_with_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = egz(dir.path(), &["--no-cache", "s-const", "-m", "1", "-d", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("closed-form\t9 (consistent)"));
}

#[test]
fn cache_round_trip_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    assert!(egz(dir.path(), &["s-const", "-m", "2", "-d", "3"]).status.success());
    assert!(egz(dir.path(), &["beta", "-W", "4", "-d", "3"]).status.success());

    let check = egz(dir.path(), &["cache", "check"]);
    assert!(check.status.success());
    assert!(stdout(&check).starts_with("2 of 2 cache lines valid"));

    let path = dir.path().join("egz-cache.tsv");
    let text = fs::read_to_string(&path).unwrap();
    let second = text.lines().nth(1).unwrap();
    let witness = second.split('\t').nth(5).unwrap();
    let at = text.len() - second.len() - 1 + second.find(witness).unwrap();
    let mut bytes = text.into_bytes();
    bytes[at] = if bytes[at] == b'0' { b'1' } else { b'0' };
    fs::write(&path, bytes).unwrap();

    let check = egz(dir.path(), &["cache", "check"]);
    assert!(!check.status.success());
    let out = stdout(&check);
    assert!(out.contains("line 1\tok"));
    assert!(out.contains("line 2\tFAIL"));
}

#[test]
fn same_seed_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| egz(dir.path(), &["--seed", seed, "verify", "all", "--trials", "20"]);
    let (a, b) = (run("7"), run("7"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn witness_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let seq = "0001\n0010\n0100\n1000\n0011\n0101\n1001\n0110\n1010\n";
    fs::write(dir.path().join("seq.txt"), seq).unwrap();
    let o = egz(dir.path(), &["witness", "-m", "2", "--seq", "seq.txt"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("zero-sum subsequence of length 4 found"));
    assert_eq!(out.lines().filter(|l| l.starts_with("element\t")).count(), 4);
}

#[test]
fn mw_check_on_hamming_code() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("h.txt"), "3 7\n1010101\n0110011\n0001111\n").unwrap();
    let o = egz(dir.path(), &["mw-check", "--code", "h.txt"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("MacWilliams identities hold for n = 7, k = 4"));
}

#[test]
fn bad_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!egz(dir.path(), &["frobnicate"]).status.success());
    assert!(!egz(dir.path(), &["verify", "no-such-suite"]).status.success());
    assert!(!egz(dir.path(), &["witness", "-m", "2", "--seq", "missing.txt"]).status.success());
}

#[test]
fn conjecture_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let o = egz(dir.path(), &["--no-cache", "test-conjecture", "-m", "1", "-d", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("conjecture s_2(3) = 9: confirmed"));
    assert!(!egz(dir.path(), &["--no-cache", "test-conjecture", "-m", "1", "-d", "5"]).status.success());
}
