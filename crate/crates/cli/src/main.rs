use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use egz::codes::{dual, n_table, verify_macwilliams, weight_distribution, LinearCode, N5_TABLE_RANGE};
use egz::gf2::BitMatrix;
use egz::verify::{expand_suites, run_suite};
use egz::witness::extract_zero_sum;
use egz::zerosum::{
    beta_search, bounds_ledger_with, closed_form_s, conjectured_s, r_from_s, s_from_beta, Budget, Cache, ConstantRecord,
    GroupSequence, LedgerConfig, Quantity, WeightSet, MAX_SEARCH_DIM,
};

mod report;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "egz", version, about = "Zero-sum constants over Z_2^d")]
struct Cli {
    /// Seed for randomized verification.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Cache file for exact values.
    #[arg(long, global = true, default_value = "egz-cache.tsv")]
    cache: PathBuf,

    /// Do not read or write the cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Search node limit per subtree.
    #[arg(long, global = true, default_value_t = 2_000_000_000)]
    nodes: u64,

    /// Wall-clock limit per search, in seconds.
    #[arg(long, global = true, default_value_t = 300)]
    seconds: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Largest set in Z_2^d with no zero-sum subset of a size in W.
    Beta {
        #[arg(short = 'W', long = "weights")]
        weights: WeightSet,
        #[arg(short, long)]
        d: usize,
    },
    /// s_2m(d), computed by search and cross-checked against closed forms.
    SConst {
        #[arg(short, long)]
        m: usize,
        #[arg(short, long)]
        d: usize,
    },
    /// R_2m(n), the least redundancy of a length-n code without weight 2m.
    RConst {
        #[arg(short, long)]
        m: usize,
        #[arg(short, long)]
        n: usize,
    },
    /// Extract 2m terms summing to zero from a sequence file.
    Witness {
        #[arg(short, long)]
        m: usize,
        #[arg(long)]
        seq: PathBuf,
    },
    /// Bounds on s_2m(d) from the theorem ledger and cached values.
    Bounds {
        #[arg(short, long)]
        m: usize,
        #[arg(short, long)]
        d: usize,
    },
    /// Print a reference table.
    Table {
        which: TableKind,
        /// Largest dimension for the s4 table.
        #[arg(long, default_value_t = 7)]
        max_d: usize,
    },
    /// Run a randomized property suite: a name such as `lemma-digraph:9`,
    /// a family such as `lemma-digraph` or `extractor`, or `all`.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Check the MacWilliams identities for a code given by a parity-check matrix.
    MwCheck {
        #[arg(long)]
        code: PathBuf,
    },
    /// Evidence for the conjectured value of s_2m(d); never asserts it.
    TestConjecture {
        #[arg(short, long)]
        m: usize,
        #[arg(short, long)]
        d: usize,
    },
    /// Cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Revalidate every cached witness.
    Check,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableKind {
    S4,
    N5,
}

struct Ctx {
    seed: u64,
    cache: Option<Cache>,
    budget: Budget,
}

impl Ctx {
    fn store(&self, record: &ConstantRecord, report: &mut Report) -> Result<()> {
        if let Some(cache) = &self.cache {
            if cache.append(record)? {
                report.kv("cached", cache.path().display());
            }
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, ok)) => {
            // A closed pipe is not an error worth reporting.
            let _ = write!(std::io::stdout().lock(), "{report}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(Report, bool)> {
    let ctx = Ctx {
        seed: cli.seed,
        cache: (!cli.no_cache).then(|| Cache::new(cli.cache.clone())),
        budget: Budget::nodes(cli.nodes).with_time(Duration::from_secs(cli.seconds)),
    };
    match cli.command {
        Command::Beta { weights, d } => beta(&ctx, &weights, d),
        Command::SConst { m, d } => s_const(&ctx, m, d),
        Command::RConst { m, n } => {
            let rec = r_from_s(m, n, &ctx.budget)?;
            let mut report = Report::record(&rec);
            ctx.store(&rec, &mut report)?;
            Ok((report.with_trace(&rec.trace), true))
        }
        Command::Witness { m, seq } => witness(m, &seq),
        Command::Bounds { m, d } => bounds(&ctx, m, d),
        Command::Table { which, max_d } => match which {
            TableKind::S4 => table_s4(&ctx, max_d),
            TableKind::N5 => Ok((table_n5()?, true)),
        },
        Command::Verify { suite, trials } => verify(&ctx, &suite, trials),
        Command::MwCheck { code } => mw_check(&code),
        Command::TestConjecture { m, d } => test_conjecture(&ctx, m, d),
        Command::Cache { action: CacheAction::Check } => cache_check(&ctx),
    }
}

fn verify(ctx: &Ctx, name: &str, trials: usize) -> Result<(Report, bool)> {
    let suites = expand_suites(name)?;
    let mut lines = Vec::new();
    let mut failed = 0;
    for suite in suites {
        let r = run_suite(suite, ctx.seed, trials)?;
        if !r.all_passed() {
            failed += 1;
        }
        lines.push(r);
    }
    let mut report = Report::new(format!(
        "{} of {} suites passed (seed {}, {trials} trials each)",
        lines.len() - failed,
        lines.len(),
        ctx.seed
    ));
    for r in &lines {
        report.kv(&r.suite.to_string(), format!("{}/{}", r.passed, r.trials));
        for f in &r.failures {
            report.kv("failure", f);
        }
    }
    Ok((report, failed == 0))
}

fn beta(ctx: &Ctx, weights: &WeightSet, d: usize) -> Result<(Report, bool)> {
    let rec = beta_search(weights, d, &ctx.budget)?;
    let mut report = Report::record_as(&rec, "beta");
    ctx.store(&rec, &mut report)?;
    Ok((report.with_trace(&rec.trace), true))
}

fn compute_s(ctx: &Ctx, m: usize, d: usize) -> Result<ConstantRecord> {
    if d <= MAX_SEARCH_DIM {
        Ok(s_from_beta(m, d, &ctx.budget)?)
    } else {
        let facts = cached_facts(ctx)?;
        Ok(bounds_ledger_with(&Quantity::S { m, d }, &facts, LedgerConfig::default())?)
    }
}

fn s_const(ctx: &Ctx, m: usize, d: usize) -> Result<(Report, bool)> {
    let closed = closed_form_s(m, d);
    let rec = compute_s(ctx, m, d)?;
    let mut report = Report::record(&rec);
    let mut ok = true;
    if let Some(c) = &closed {
        let agrees = rec.lower <= c.lower && c.lower <= rec.upper;
        report.kv(
            "closed-form",
            format!("{} ({})", c.lower, if agrees { "consistent" } else { "CONFLICT" }),
        );
        ok = agrees;
    }
    ctx.store(&rec, &mut report)?;
    Ok((report.with_trace(&rec.trace), ok))
}

fn test_conjecture(ctx: &Ctx, m: usize, d: usize) -> Result<(Report, bool)> {
    let Some(want) = conjectured_s(m, d) else {
        bail!("no conjectured value of s_{}({d})", 2 * m);
    };
    let rec = compute_s(ctx, m, d)?;
    let verdict = match rec.value() {
        Some(v) if v == want => "confirmed",
        _ if rec.lower <= want && want <= rec.upper => "open",
        _ => "refuted",
    };
    let mut report = Report::new(format!("conjecture s_{}({d}) = {want}: {verdict}", 2 * m));
    report.kv("computed", rec.headline());
    report.kv("lower", rec.lower);
    report.kv("upper", rec.upper);
    ctx.store(&rec, &mut report)?;
    Ok((report.with_trace(&rec.trace), true))
}

fn cached_facts(ctx: &Ctx) -> Result<Vec<ConstantRecord>> {
    Ok(match &ctx.cache {
        Some(c) => c.trusted()?,
        None => Vec::new(),
    })
}

fn bounds(ctx: &Ctx, m: usize, d: usize) -> Result<(Report, bool)> {
    let facts = cached_facts(ctx)?;
    let rec = bounds_ledger_with(&Quantity::S { m, d }, &facts, LedgerConfig::default())?;
    let mut report = Report::record(&rec);
    report.kv("cached-facts", facts.len());
    Ok((report.with_trace(&rec.trace), true))
}

fn witness(m: usize, path: &PathBuf) -> Result<(Report, bool)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let seq = GroupSequence::parse(&text)?;
    let w = extract_zero_sum(&seq, m)?;
    let mut report = Report::new(format!("zero-sum subsequence of length {} found", w.len()));
    report.kv("dim", seq.dim());
    report.kv("length", seq.len());
    report.kv("indices", &w);
    for &i in w.indices() {
        report.kv("element", format!("{i}\t{}", seq.elements()[i]));
    }
    Ok((report, true))
}

fn table_s4(ctx: &Ctx, max_d: usize) -> Result<(Report, bool)> {
    let mut report = Report::new(format!("s_4(d) for d = 1..{max_d}"));
    let mut ok = true;
    for d in 1..=max_d {
        let rec = s_from_beta(2, d, &ctx.budget)?;
        let closed = closed_form_s(2, d).map_or_else(|| "-".to_string(), |c| c.lower.to_string());
        if let Some(c) = closed_form_s(2, d) {
            ok &= rec.lower <= c.lower && c.lower <= rec.upper;
        }
        let value = match rec.value() {
            Some(v) => v.to_string(),
            None => format!("[{}, {}]", rec.lower, rec.upper),
        };
        report.kv(&format!("d={d}"), format!("{value}\t{}\tclosed-form {closed}", rec.status));
        ctx.store(&rec, &mut report)?;
    }
    Ok((report, ok))
}

fn table_n5() -> Result<Report> {
    let mut report = Report::new("N(r, 5): longest codes of redundancy r and distance 5");
    for r in N5_TABLE_RANGE {
        let e = n_table(r, 5)?;
        let value = if e.is_exact() {
            e.lower.to_string()
        } else {
            format!("[{}, {}]", e.lower, e.upper)
        };
        report.kv(&format!("r={r}"), value);
    }
    Ok(report)
}

fn mw_check(path: &PathBuf) -> Result<(Report, bool)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let h = BitMatrix::parse(&text)?;
    let code = LinearCode::from_any_parity_check(&h)?;
    let (n, k) = (code.length(), code.dimension());
    let a = weight_distribution(&code)?;
    let b = weight_distribution(&dual(&code))?;
    let holds = verify_macwilliams(&a, &b, n, k)?;
    let mut report = Report::new(format!(
        "MacWilliams identities {} for n = {n}, k = {k}",
        if holds { "hold" } else { "FAIL" }
    ));
    report.kv("code-weights", join(a.counts()));
    report.kv("dual-weights", join(b.counts()));
    Ok((report, holds))
}

fn join(counts: &[u64]) -> String {
    counts.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn cache_check(ctx: &Ctx) -> Result<(Report, bool)> {
    let Some(cache) = &ctx.cache else {
        bail!("cache check needs a cache file");
    };
    let lines = cache.read()?;
    let bad = lines.iter().filter(|l| l.record.is_err()).count();
    let mut report = Report::new(format!(
        "{} of {} cache lines valid",
        lines.len() - bad,
        lines.len()
    ));
    report.kv("path", cache.path().display());
    for l in &lines {
        match &l.record {
            Ok(r) => report.kv(&format!("line {}", l.line), format!("ok\t{}", r.headline())),
            Err(e) => report.kv(&format!("line {}", l.line), format!("FAIL\t{e}")),
        }
    }
    Ok((report, bad == 0))
}
