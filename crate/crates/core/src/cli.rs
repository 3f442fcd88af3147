//! Command-line front end. [`run`] takes the argument list and two output
//! streams and returns the process exit code:
//! 0 ok, 1 input error, 2 budget or strategy error, 3 verification failure,
//! 4 resource limit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::gen;
use crate::gf2::{Gf2Vec, RequestBatch};
use crate::oracle::{exhaustive_check, verify_sets, CheckMode, Limits};
use crate::params::{alpha_k, alpha_servers, fb23_k, fb56_k, Alpha};
use crate::solvers::{solve, Solution, Strategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "fbcodes",
    version,
    about = "Functional batch codes from Hadamard generator matrices"
)]
struct Cli {
    /// Trace every column reordering on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build a code and recovery sets for a request batch.
    Solve(SolveArgs),
    /// Check a solution document against its request batch.
    Verify(VerifyArgs),
    /// Brute-force feasibility sweep over small request multisets.
    Oracle(OracleArgs),
    /// Print server counts and request budgets per strategy.
    Table(TableArgs),
    /// Solve and verify many seeded random batches.
    Stress(StressArgs),
}

#[derive(Args, Debug)]
struct BatchSource {
    /// Request file: one bitstring per line, '#' comments.
    #[arg(long, conflicts_with = "random")]
    requests: Option<PathBuf>,
    /// Generate this many uniform random requests instead.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    s: u32,
    /// fb23, fb56, alpha, opt, batch or auto.
    #[arg(long, default_value = "auto")]
    strategy: String,
    /// Exact rational p/q, required by the alpha strategy.
    #[arg(long)]
    alpha: Option<String>,
    #[command(flatten)]
    source: BatchSource,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Solution JSON written by `solve`.
    #[arg(long)]
    solution: PathBuf,
    #[command(flatten)]
    source: BatchSource,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    s: u32,
    #[arg(long)]
    k: usize,
    /// Enumerate every multiset instead of sampling.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Lift the soft size limits.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// A single dimension or an inclusive range such as 3..10.
    #[arg(long, default_value = "1..12")]
    s: String,
}

#[derive(Args, Debug)]
struct StressArgs {
    #[arg(long)]
    s: u32,
    #[arg(long, default_value = "auto")]
    strategy: String,
    #[arg(long)]
    alpha: Option<String>,
    /// Batch size; defaults to the strategy's maximum.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Request distribution: random, unit or odd.
    #[arg(long, default_value = "random")]
    kind: String,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// JSON form of a [`Solution`], version 1.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SolutionDoc {
    pub version: u32,
    pub s: u32,
    pub strategy: String,
    pub alpha: Option<String>,
    pub servers: Vec<String>,
    pub recovery_sets: Vec<Vec<usize>>,
    pub request_hash: String,
}

/// SHA-256 of the batch in request-file form, lowercase hex.
pub fn request_hash(m: &RequestBatch) -> String {
    Sha256::digest(m.to_text().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn solution_doc(sol: &Solution, m: &RequestBatch) -> SolutionDoc {
    SolutionDoc {
        version: 1,
        s: sol.s,
        strategy: sol.strategy.name().to_string(),
        alpha: sol.alpha.map(|a| a.to_string()),
        servers: sol.servers.iter().map(|v| v.to_string()).collect(),
        recovery_sets: sol.recovery_sets.clone(),
        request_hash: request_hash(m),
    }
}

pub fn solution_json(sol: &Solution, m: &RequestBatch) -> String {
    let mut text = serde_json::to_string(&solution_doc(sol, m)).expect("plain data serializes");
    text.push('\n');
    text
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::DimensionOutOfRange(_)
            | Error::DimensionMismatch { .. }
            | Error::BitsOutOfRange { .. }
            | Error::ZeroRequest(_)
            | Error::AlphaOutOfRange(_)
            | Error::IndexOutOfRange { .. } => EXIT_INPUT,
            Error::TooManyRequests { .. }
            | Error::WrongBatchSize { .. }
            | Error::NoStrategy { .. }
            | Error::NotReducible
            | Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::LimitExceeded(_) => EXIT_LIMIT,
            _ => EXIT_VERIFY,
        };
        Failure(code, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn input_err(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| input_err(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| input_err(e.to_string())),
    }
}

fn load_batch(src: &BatchSource, s: u32) -> Result<RequestBatch, Failure> {
    match (&src.requests, src.random) {
        (Some(path), None) => Ok(RequestBatch::parse_text(&read(path)?, s)?),
        (None, Some(k)) => {
            crate::gf2::check_dim(s)?;
            Ok(gen::random_batch(s, k, &mut gen::rng(src.seed)))
        }
        _ => Err(input_err(
            "give exactly one of --requests FILE or --random K",
        )),
    }
}

fn parse_strategy(
    name: &str,
    alpha: Option<&str>,
) -> Result<(Option<Strategy>, Option<Alpha>), Failure> {
    let strategy = match name {
        "auto" => None,
        other => Some(Strategy::parse(other)?),
    };
    let alpha = alpha.map(Alpha::parse).transpose()?;
    if alpha.is_some() != (strategy == Some(Strategy::Alpha)) {
        return Err(input_err(
            "--alpha is required with, and only with, --strategy alpha",
        ));
    }
    Ok((strategy, alpha))
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> CmdResult {
    let (strategy, alpha) = parse_strategy(&a.strategy, a.alpha.as_deref())?;
    let m = load_batch(&a.source, a.s)?;
    let sol = solve(&m, strategy, alpha)?;
    emit(out, a.out.as_ref(), &solution_json(&sol, &m))
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let doc: SolutionDoc = serde_json::from_str(&read(&a.solution)?)
        .map_err(|e| input_err(format!("malformed solution JSON: {e}")))?;
    if doc.version != 1 {
        return Err(input_err(format!("unsupported version {}", doc.version)));
    }
    let servers = doc
        .servers
        .iter()
        .enumerate()
        .map(|(i, text)| {
            Gf2Vec::parse(text)
                .ok()
                .filter(|v| v.dim() == doc.s)
                .ok_or_else(|| {
                    input_err(format!(
                        "server {i}: {text:?} is not a {}-bit vector",
                        doc.s
                    ))
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = load_batch(&a.source, doc.s)?;
    if request_hash(&m) != doc.request_hash {
        return Err(input_err(
            "request batch does not match the solution's request_hash",
        ));
    }
    verify_sets(&servers, &m, &doc.recovery_sets)
        .map_err(|v| Failure(EXIT_VERIFY, format!("verification failed: {v}")))?;
    writeln!(
        out,
        "ok: {} requests over {} servers",
        m.len(),
        servers.len()
    )
    .map_err(|e| input_err(e.to_string()))
}

fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let mode = if a.full {
        CheckMode::Full
    } else {
        CheckMode::Sampled {
            count: a.samples,
            seed: a.seed,
        }
    };
    let limits = Limits {
        force: a.force,
        ..Limits::default()
    };
    let report = exhaustive_check(a.s, a.k, mode, a.jobs, &limits)?;
    emit(out, a.out.as_ref(), &report.to_log())?;
    let _ = writeln!(err, "elapsed {:.3}s", report.elapsed.as_secs_f64());
    if report.failures.is_empty() && report.constructive_failures.is_empty() {
        Ok(())
    } else {
        Err(Failure(EXIT_VERIFY, "oracle reported failures".into()))
    }
}

fn parse_range(text: &str) -> Result<(u32, u32), Failure> {
    let bad = || input_err(format!("expected N or A..B, got {text:?}"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo < 1 || hi > 20 || lo > hi {
        return Err(input_err(format!(
            "dimension range {text:?} must lie in 1..20"
        )));
    }
    Ok((lo, hi))
}

/// Rows of the parameter table for one `s`: (label, servers, k, note).
pub fn table_rows(s: u32) -> Vec<(String, Option<usize>, Option<usize>, &'static str)> {
    let n = 1usize << s;
    let half = n / 2;
    let mut rows = vec![(
        "fb23".to_string(),
        Some(n - 1),
        Some(fb23_k(s)),
        "pairs plus redundant repairs",
    )];
    if s >= 7 {
        rows.push((
            "fb56".into(),
            Some(n - 1),
            Some(fb56_k(s)),
            "two-stage, size-4 sets",
        ));
    } else {
        rows.push(("fb56".into(), None, None, "falls back to fb23"));
    }
    for a in [Alpha::new(3, 4).expect("in range"), Alpha::one()] {
        rows.push((
            format!("alpha={a}"),
            Some(alpha_servers(s, a)),
            Some(alpha_k(s, a)),
            "extended with e columns",
        ));
    }
    rows.push((
        "opt".into(),
        Some(2 * n - 2),
        Some(n),
        "double matrix, optimal length",
    ));
    rows.push((
        "batch".into(),
        Some(n - 1),
        Some(half),
        "row-reducible batches only",
    ));
    rows.push((
        "known FP".into(),
        Some(n - 1),
        Some(half),
        "functional PIR, prior result",
    ));
    rows.push((
        "known B".into(),
        Some(n - 1),
        Some(half),
        "batch codes, prior result",
    ));
    rows.push((
        "known FB".into(),
        Some(2 * n - 2),
        Some(n),
        "functional batch, prior bound",
    ));
    rows
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> CmdResult {
    let (lo, hi) = parse_range(&a.s)?;
    let mut text = format!(
        "{:<3} {:<10} {:>8} {:>7}  {}\n",
        "s", "strategy", "servers", "k_max", "note"
    );
    for s in lo..=hi {
        for (label, n, k, note) in table_rows(s) {
            let show = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
            text.push_str(&format!(
                "{:<3} {:<10} {:>8} {:>7}  {}\n",
                s,
                label,
                show(n),
                show(k),
                note
            ));
        }
    }
    emit(out, None, &text)
}

fn default_k(s: u32, strategy: Option<Strategy>, alpha: Option<Alpha>) -> usize {
    match strategy {
        Some(Strategy::Fb56) if s >= 7 => fb56_k(s),
        Some(Strategy::Alpha) => alpha_k(s, alpha.expect("checked")),
        Some(Strategy::Opt) => 1 << s,
        Some(Strategy::Batch) => 1 << (s - 1),
        _ => fb23_k(s),
    }
}

fn cmd_stress(a: &StressArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    crate::gf2::check_dim(a.s)?;
    let (strategy, alpha) = parse_strategy(&a.strategy, a.alpha.as_deref())?;
    let k = a.k.unwrap_or_else(|| default_k(a.s, strategy, alpha));
    let make: fn(u32, usize, &mut rand_chacha::ChaCha8Rng) -> RequestBatch = match a.kind.as_str() {
        "random" => |s, k, r| gen::random_batch(s, k, r),
        "unit" => |s, k, r| gen::random_unit_batch(s, k, r),
        "odd" => |s, k, r| gen::random_odd_batch(s, k, r),
        other => return Err(input_err(format!("unknown --kind {other:?}"))),
    };
    let one = |r: usize| -> Result<(), String> {
        let m = make(a.s, k, &mut gen::rng(gen::run_seed(a.seed, r as u64)));
        let mut sol = solve(&m, strategy, alpha).map_err(|e| format!("run {r}: {e}"))?;
        if a.inject_fault {
            if let Some(set) = sol.recovery_sets.first_mut() {
                set.pop();
            }
        }
        verify_sets(&sol.servers, &m, &sol.recovery_sets).map_err(|v| format!("run {r}: {v}"))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| Failure(EXIT_LIMIT, e.to_string()))?;
    let results: Vec<Result<(), String>> =
        pool.install(|| (0..a.runs).into_par_iter().map(one).collect());
    let mut ok = 0;
    for r in &results {
        match r {
            Ok(()) => ok += 1,
            Err(msg) => {
                let _ = writeln!(err, "{msg}");
            }
        }
    }
    emit(out, None, &format!("{ok}/{} verified\n", a.runs))?;
    if ok == a.runs {
        Ok(())
    } else {
        Err(Failure(EXIT_VERIFY, format!("{} runs failed", a.runs - ok)))
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let level = if cli.verbose {
        log::LevelFilter::Trace
    } else {
        log::LevelFilter::Warn
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .try_init();
    let result = match &cli.cmd {
        Cmd::Solve(a) => cmd_solve(a, out),
        Cmd::Verify(a) => cmd_verify(a, out),
        Cmd::Oracle(a) => cmd_oracle(a, out, err),
        Cmd::Table(a) => cmd_table(a, out),
        Cmd::Stress(a) => cmd_stress(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
