//! Command-line frontend: single tests, range searches, and polynomial
//! precomputation.
//!
//! Exit codes: 0 prime, 1 composite, 2 inapplicable, 3 baseline disagreement,
//! 64 usage error, 74 I/O error.

use clap::{Args, Parser, Subcommand};
use cycloprime::baseline::miller_rabin;
use cycloprime::cache;
use cycloprime::engine::{certify, CertifyOptions};
use cycloprime::report::RunReport;
use cycloprime::residue::{build_instance, check_p, w_index, TestInstance};
use cycloprime::sympoly::RecursionSet;
use num_bigint::BigUint;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

const EXIT_DISAGREEMENT: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "cycloprime", about = "Primality testing for M = A*p^n + w_n via cyclotomic reciprocity", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test a single number M = A*p^n + w_n^(i).
    Test(TestArgs),
    /// Search a range of instances, one report line each.
    Search(SearchArgs),
    /// Compute the recursion polynomials for one p and write the cache file.
    Precompute(PrecomputeArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Odd prime p in {3, 5, 7, 11, 13, 17, 19}.
    #[arg(long)]
    p: u32,
    /// Emit JSON-lines reports instead of human-readable lines.
    #[arg(long)]
    json: bool,
    /// Also run Miller-Rabin (64 rounds) and compare verdicts.
    #[arg(long = "check-baseline")]
    check_baseline: bool,
    /// Seed for randomized Miller-Rabin bases (reproducible runs).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Include elapsed milliseconds in human-readable output.
    #[arg(long)]
    timing: bool,
    /// Directory for recursion-polynomial cache files (auto-load or rebuild).
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Exponent n >= 1.
    #[arg(long)]
    n: u32,
    /// Cofactor A in [0, p^n).
    #[arg(long = "A")]
    a: String,
    /// Residue index i in [0, p-2] selecting w = w_n^(i).
    #[arg(long, default_value_t = 0)]
    i: u32,
    /// Explicit w value (decimal); overrides --i.
    #[arg(long)]
    w: Option<String>,
    /// Force this witness prime l instead of searching.
    #[arg(long)]
    l: Option<u64>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Lower end of the A range (inclusive).
    #[arg(long = "A-min", default_value_t = 0)]
    a_min: u64,
    /// Upper end of the A range (inclusive).
    #[arg(long = "A-max")]
    a_max: u64,
    /// Lower end of the n range (inclusive).
    #[arg(long = "n-min")]
    n_min: u32,
    /// Upper end of the n range (inclusive).
    #[arg(long = "n-max")]
    n_max: u32,
    /// Residue indices to include (repeatable); all of 0..p-2 when omitted.
    #[arg(long)]
    i: Vec<u32>,
    /// Worker threads for independent instances (output order is unchanged).
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

#[derive(Args)]
struct PrecomputeArgs {
    /// Odd prime p in {3, 5, 7, 11, 13, 17, 19}.
    #[arg(long)]
    p: u32,
    /// Output path for the cache file.
    #[arg(long)]
    out: PathBuf,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn load_polys(p: u32, cache_dir: &Option<PathBuf>) -> RecursionSet {
    let path = cache_dir.as_ref().map(|d| d.join(cache::default_file_name(p)));
    if let Some(dir) = cache_dir {
        let _ = std::fs::create_dir_all(dir);
    }
    cache::load_or_compute(p, path.as_deref())
}

fn run_one(
    inst: &TestInstance,
    polys: &RecursionSet,
    opts: &CertifyOptions,
    check_baseline: bool,
) -> RunReport {
    let start = Instant::now();
    let verdict = certify(inst, polys, opts);
    let ms = start.elapsed().as_millis() as u64;
    let baseline = check_baseline.then(|| miller_rabin(&inst.m, 64, opts.seed));
    RunReport::new(inst, &verdict, ms, baseline)
}

fn emit(report: &RunReport, json: bool, timing: bool) {
    if json {
        println!("{}", report.json_line());
    } else if timing {
        println!("{}", report.human_line());
    } else {
        let base = match &report.baseline {
            Some(b) => format!("  baseline={b}"),
            None => String::new(),
        };
        println!(
            "p={} n={} A={} i={}  ({} digits)  {}{}",
            report.p, report.n, report.a, report.i, report.digits, report.verdict, base
        );
    }
}

fn verdict_exit(report: &RunReport) -> u8 {
    if report.disagrees() {
        return EXIT_DISAGREEMENT;
    }
    match report.verdict.as_str() {
        "prime" => 0,
        "composite" => 1,
        _ => 2,
    }
}

fn cmd_test(args: &TestArgs) -> ExitCode {
    let c = &args.common;
    if check_p(c.p).is_err() {
        return usage_error(&format!("unsupported p = {}", c.p));
    }
    if args.n < 1 {
        return usage_error("n must be at least 1");
    }
    let a = match BigUint::from_str(&args.a) {
        Ok(a) => a,
        Err(_) => return usage_error(&format!("A = {:?} is not a nonnegative integer", args.a)),
    };
    let i = match &args.w {
        None => args.i,
        Some(ws) => {
            let w = match BigUint::from_str(ws) {
                Ok(w) => w,
                Err(_) => return usage_error(&format!("w = {ws:?} is not a nonnegative integer")),
            };
            match w_index(&w, c.p, args.n) {
                Some(i) => i,
                None => {
                    return usage_error(&format!(
                        "w = {ws} is not a solution of x^(p-1) = 1 mod {}^{}",
                        c.p, args.n
                    ))
                }
            }
        }
    };
    let inst = match build_instance(c.p, args.n, a, i) {
        Ok(inst) => inst,
        Err(e) => return usage_error(&e.to_string()),
    };
    let polys = load_polys(c.p, &c.cache_dir);
    let opts = CertifyOptions { forced_l: args.l, seed: c.seed, ..Default::default() };
    let report = run_one(&inst, &polys, &opts, c.check_baseline);
    emit(&report, c.json, c.timing);
    ExitCode::from(verdict_exit(&report))
}

fn cmd_search(args: &SearchArgs) -> ExitCode {
    let c = &args.common;
    if check_p(c.p).is_err() {
        return usage_error(&format!("unsupported p = {}", c.p));
    }
    if args.a_min > args.a_max || args.n_min > args.n_max || args.n_min < 1 {
        return usage_error("empty or invalid A/n range");
    }
    let indices: Vec<u32> = if args.i.is_empty() {
        (0..c.p - 1).collect()
    } else {
        if let Some(&bad) = args.i.iter().find(|&&i| i > c.p - 2) {
            return usage_error(&format!("index i = {bad} out of range [0, {}]", c.p - 2));
        }
        args.i.clone()
    };
    let polys = load_polys(c.p, &c.cache_dir);
    let opts = CertifyOptions { seed: c.seed, ..Default::default() };
    // lexicographic in (A, n, i); skip A >= p^n silently (not representable)
    let mut work: Vec<(u64, u32, u32)> = Vec::new();
    for a in args.a_min..=args.a_max {
        for n in args.n_min..=args.n_max {
            if BigUint::from(a) >= BigUint::from(c.p).pow(n) {
                continue;
            }
            for &i in &indices {
                work.push((a, n, i));
            }
        }
    }
    let run = |&(a, n, i): &(u64, u32, u32)| -> RunReport {
        let inst = build_instance(c.p, n, BigUint::from(a), i)
            .expect("enumerated instances are in range");
        run_one(&inst, &polys, &opts, c.check_baseline)
    };
    let reports: Vec<RunReport> = if args.parallel > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.parallel)
            .build()
            .expect("thread pool");
        pool.install(|| work.par_iter().map(run).collect())
    } else {
        work.iter().map(run).collect()
    };
    let mut disagreed = false;
    for report in &reports {
        emit(report, c.json, c.timing);
        disagreed |= report.disagrees();
    }
    if disagreed {
        ExitCode::from(EXIT_DISAGREEMENT)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_precompute(args: &PrecomputeArgs) -> ExitCode {
    if check_p(args.p).is_err() {
        return usage_error(&format!("unsupported p = {}", args.p));
    }
    let rs = RecursionSet::compute(args.p);
    match cache::save(&rs, &args.out) {
        Ok(()) => {
            eprintln!(
                "wrote {} (G_1..G_{}, {} terms total)",
                args.out.display(),
                rs.r,
                rs.g.iter().map(|g| g.num_terms()).sum::<usize>()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match &cli.cmd {
        Cmd::Test(args) => cmd_test(args),
        Cmd::Search(args) => cmd_search(args),
        Cmd::Precompute(args) => cmd_precompute(args),
    }
}
