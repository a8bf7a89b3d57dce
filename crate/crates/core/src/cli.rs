//! The `fibkit` command line.
//!
//! Exit codes: 0 when everything passed, 1 when a verification or proof
//! failed, 2 for usage errors (bad arguments, unknown identities, grids the
//! engine cannot evaluate).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dsl::{builtin_catalog, Catalog, Identity};
use crate::seq;
use crate::verify::{
    parse_seed, prove_symbolic, verify_expansion, verify_grid_with, GridSpec, ParamRange, VerifyOptions,
    VerifyReport,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Path of a catalog file that replaces the built-in catalog.
pub const CATALOG_ENV: &str = "FIBKIT_CATALOG";

#[derive(Debug, Parser)]
#[command(name = "fibkit", version, about = "Exact Fibonacci, Lucas and generalized Fibonacci numbers, and verification of summation identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeqName {
    F,
    L,
    G,
}

#[derive(Debug, clap::Args)]
struct Selector {
    /// Identity name or paper tag; may be repeated.
    #[arg(long = "id", num_args = 1..)]
    ids: Vec<String>,
    /// Every identity in the catalog.
    #[arg(long)]
    all: bool,
    /// Catalog file to read identities from instead of the built-in one.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print F(n), L(n) or G(n) exactly.
    Eval {
        #[arg(value_enum, ignore_case = true)]
        seq: SeqName,
        #[arg(allow_negative_numbers = true)]
        n: i64,
        /// Seed `g0,g1`; required for G.
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
    },
    /// Check identities numerically over a parameter grid.
    Verify {
        #[command(flatten)]
        select: Selector,
        #[arg(long, allow_hyphen_values = true, value_name = "LO..HI")]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true, value_name = "LO..HI")]
        m: Option<String>,
        #[arg(long, allow_hyphen_values = true, value_name = "LO..HI")]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true, value_name = "LO..HI")]
        q: Option<String>,
        /// Extra range for any parameter, `name=lo..hi`.
        #[arg(long = "range", allow_hyphen_values = true, value_name = "NAME=LO..HI")]
        ranges: Vec<String>,
        /// Seeds `g0,g1` for G.
        #[arg(long, num_args = 1..)]
        seeds: Vec<String>,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        #[arg(long)]
        workers: Option<usize>,
        /// Double-check every point with the brute-force oracle.
        #[arg(long)]
        oracle: bool,
        /// Report elapsed_ms as 0 so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Prove identities for all integer parameters at fixed ranks.
    Prove {
        #[command(flatten)]
        select: Selector,
        /// Ranks to instantiate for rank-parametric identities.
        #[arg(long = "n", num_args = 1.., default_values_t = vec![1, 2, 3, 4])]
        ranks: Vec<i64>,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        #[arg(long)]
        no_timing: bool,
    },
    /// Time fast doubling against naive iteration.
    Bench {
        #[arg(required = true)]
        ns: Vec<u64>,
        /// Above this n the naive side only tracks the low 64 digits.
        #[arg(long, default_value_t = 200_000)]
        naive_limit: u64,
    },
    /// List catalog entries.
    Catalog {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Print the canonical catalog file instead of a listing.
        #[arg(long)]
        text: bool,
    },
}

struct Usage(String);

impl<T: std::fmt::Display> From<T> for Usage {
    fn from(e: T) -> Self {
        Usage(e.to_string())
    }
}

/// Runs the command line with process streams.
pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line, writing to `out` and `err`; returns the exit code.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(split_seed_lists(args)) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval { seq, n, seed } => cmd_eval(seq, n, seed, out),
        Command::Verify { select, n, m, p, q, ranges, seeds, format, workers, oracle, no_timing } => {
            let named = [("n", n), ("m", m), ("p", p), ("q", q)];
            cmd_verify(&select, &named, &ranges, &seeds, format, workers, oracle, no_timing, out)
        }
        Command::Prove { select, ranks, format, no_timing } => cmd_prove(&select, &ranks, format, no_timing, out),
        Command::Bench { ns, naive_limit } => cmd_bench(&ns, naive_limit, out),
        Command::Catalog { file, text } => cmd_catalog(file, text, out),
    };
    match result {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

/// Rewrites `--seeds a,b -c,d` as `--seeds=a,b --seeds=-c,d`, so a seed list
/// can hold negative values without swallowing the flags after it.
fn split_seed_lists(args: impl IntoIterator<Item = OsString>) -> Vec<OsString> {
    let mut out = Vec::new();
    let mut in_seeds = false;
    for a in args {
        let s = a.to_string_lossy();
        if s == "--seeds" {
            in_seeds = true;
            continue;
        }
        if in_seeds && !s.starts_with("--") && s.contains(',') {
            out.push(OsString::from(format!("--seeds={s}")));
            continue;
        }
        in_seeds = false;
        out.push(a);
    }
    out
}

fn cmd_eval(which: SeqName, n: i64, seed: Option<String>, out: &mut dyn Write) -> Result<i32, Usage> {
    let value = match (which, seed) {
        (SeqName::F, None) => seq::fib(n),
        (SeqName::L, None) => seq::lucas(n),
        (SeqName::G, Some(s)) => seq::gen(&parse_seed(&s)?, n),
        (SeqName::G, None) => return Err(Usage("G needs --seed g0,g1".into())),
        (_, Some(_)) => return Err(Usage("--seed only applies to G".into())),
    };
    writeln!(out, "{value}")?;
    Ok(EXIT_PASS)
}

fn load_catalog(file: Option<&PathBuf>) -> Result<Catalog, Usage> {
    let path = file.cloned().or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from));
    match path {
        None => Ok(builtin_catalog()),
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| Usage(format!("cannot read {}: {e}", p.display())))?;
            Catalog::parse(&text).map_err(|e| Usage(format!("{}: {e}", p.display())))
        }
    }
}

/// Resolves the selector. A `--file` without `--id` selects the whole file.
fn select(sel: &Selector, catalog: &Catalog) -> Result<Vec<Identity>, Usage> {
    if sel.all || (sel.ids.is_empty() && sel.file.is_some()) {
        if catalog.is_empty() {
            return Err(Usage("catalog is empty".into()));
        }
        return Ok(catalog.entries().to_vec());
    }
    if sel.ids.is_empty() {
        return Err(Usage("choose identities with --id, --all or --file".into()));
    }
    let mut picked: Vec<Identity> = Vec::new();
    for id in &sel.ids {
        let found = catalog.select(id);
        if found.is_empty() {
            return Err(Usage(format!("no identity named or tagged `{id}`")));
        }
        for f in found {
            if !picked.iter().any(|p| p.name == f.name) {
                picked.push(f.clone());
            }
        }
    }
    Ok(picked)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    sel: &Selector,
    named: &[(&str, Option<String>)],
    extra: &[String],
    seeds: &[String],
    format: Format,
    workers: Option<usize>,
    use_oracle: bool,
    no_timing: bool,
    out: &mut dyn Write,
) -> Result<i32, Usage> {
    let catalog = load_catalog(sel.file.as_ref())?;
    let ids = select(sel, &catalog)?;
    let mut grid = GridSpec::default_grid();
    for (name, r) in named {
        if let Some(r) = r {
            grid.ranges.insert(name.to_string(), r.parse::<ParamRange>()?);
        }
    }
    for spec in extra {
        let (name, r) = spec
            .split_once('=')
            .ok_or_else(|| Usage(format!("--range `{spec}` must look like name=lo..hi")))?;
        grid.ranges.insert(name.trim().to_string(), r.parse::<ParamRange>()?);
    }
    if !seeds.is_empty() {
        grid.seeds = seeds.iter().map(|s| parse_seed(s)).collect::<Result<_, _>>()?;
    }
    let opts = VerifyOptions { workers, use_oracle, timing: !no_timing };
    let mut reports = Vec::new();
    for id in &ids {
        reports.push(verify_grid_with(id, &grid, &opts)?);
        if let Some(source) = id.expands.as_ref().and_then(|x| catalog.get(&x.source)) {
            let mut r = verify_expansion(id, source, &grid)?;
            if no_timing {
                r.elapsed_ms = 0;
            }
            reports.push(r);
        }
    }
    emit(&reports, format, out)?;
    Ok(if reports.iter().all(VerifyReport::passed) { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_prove(sel: &Selector, ranks: &[i64], format: Format, no_timing: bool, out: &mut dyn Write) -> Result<i32, Usage> {
    let catalog = load_catalog(sel.file.as_ref())?;
    let ids = select(sel, &catalog)?;
    let mut reports = Vec::new();
    for id in &ids {
        let fixed: Vec<Option<i64>> = if id.rank_param().is_some() {
            ranks.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for rank in fixed {
            let mut r = prove_symbolic(id, rank)?;
            if no_timing {
                r.elapsed_ms = 0;
            }
            reports.push(r);
        }
    }
    emit(&reports, format, out)?;
    Ok(if reports.iter().all(VerifyReport::passed) { EXIT_PASS } else { EXIT_FAIL })
}

fn emit(reports: &[VerifyReport], format: Format, out: &mut dyn Write) -> Result<(), Usage> {
    match format {
        Format::Human => {
            for r in reports {
                writeln!(out, "{}", r.to_human(10))?;
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            writeln!(out, "{} report(s), {} failed", reports.len(), failed)?;
        }
        Format::Json => {
            let text = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])?
            } else {
                serde_json::to_string_pretty(reports)?
            };
            writeln!(out, "{text}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["identity", "point", "seed", "lhs", "rhs", "status"])?;
            for r in reports {
                if r.passed() {
                    w.write_record([r.identity.as_str(), "", "", "", "", "PASS"])?;
                }
                for f in &r.failures {
                    w.write_record([&r.identity, &f.point_string(), &f.seed_string(), &f.lhs, &f.rhs, "FAIL"])?;
                }
            }
            let bytes = w.into_inner().map_err(|e| Usage(e.to_string()))?;
            out.write_all(&bytes)?;
        }
    }
    Ok(())
}

/// `F(n) mod 10^64` by plain iteration.
fn naive_low_digits(n: u64) -> BigInt {
    let modulus = num_traits::Pow::pow(BigInt::from(10), 64u32);
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = (&a + &b) % &modulus;
        a = b;
        b = next;
    }
    a
}

fn cmd_bench(ns: &[u64], naive_limit: u64, out: &mut dyn Write) -> Result<i32, Usage> {
    let log_phi = ((1.0 + 5f64.sqrt()) / 2.0).log10();
    let mut ok = true;
    writeln!(out, "{:>10} {:>10} {:>10} {:>12} {:>12} {:>8}", "n", "digits", "expected", "doubling_ms", "naive_ms", "agree")?;
    for &n in ns {
        let t = Instant::now();
        let (fast, _) = seq::fib_pair_doubling(n);
        let fast_ms = t.elapsed().as_secs_f64() * 1e3;
        let digits = fast.to_string().len() as u64;
        // floating point, display and sanity only
        let expected = (n as f64 * log_phi).floor() as u64 + 1;
        let t = Instant::now();
        let (agree, label) = if n <= naive_limit {
            (seq::fib_iterative(n) == fast, "full")
        } else {
            let modulus = num_traits::Pow::pow(BigInt::from(10), 64u32);
            (naive_low_digits(n) == &fast % &modulus, "low64")
        };
        let naive_ms = t.elapsed().as_secs_f64() * 1e3;
        let digits_ok = digits.abs_diff(expected) <= 1;
        ok &= agree && digits_ok;
        writeln!(
            out,
            "{n:>10} {digits:>10} {expected:>10} {fast_ms:>12.3} {naive_ms:>12.3} {:>8}",
            if agree { label } else { "NO" }
        )?;
    }
    Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_catalog(file: Option<PathBuf>, text: bool, out: &mut dyn Write) -> Result<i32, Usage> {
    let catalog = load_catalog(file.as_ref())?;
    if text {
        write!(out, "{}", catalog.to_text())?;
        return Ok(EXIT_PASS);
    }
    for e in catalog.entries() {
        writeln!(out, "{:<22} {:<10} [{}] {}", e.name, e.params.join(","), e.paper_tag, e.text())?;
    }
    Ok(EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fibkit").chain(args.iter().copied()).map(OsString::from);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(run_str(&["eval", "F", "10"]).1, "55\n");
        assert_eq!(run_str(&["eval", "L", "-4"]).1, "7\n");
        assert_eq!(run_str(&["eval", "G", "5", "--seed", "3,7"]).1, "44\n");
        assert_eq!(run_str(&["eval", "G", "-1", "--seed", "-4,5"]).1, "9\n");
    }

    #[test]
    fn eval_usage_errors() {
        assert_eq!(run_str(&["eval", "G", "5"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["eval", "F", "5", "--seed", "1,1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["eval", "H", "5"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["eval", "F", "x"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["eval", "G", "1", "--seed", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn bench_digit_counts() {
        let (code, out, _) = run_str(&["bench", "0", "1000"]);
        assert_eq!(code, EXIT_PASS);
        let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
        assert_eq!(rows[0][1], "1");
        assert_eq!(rows[1][1], "209");
        assert_eq!(rows[1][5], "full");
    }

    #[test]
    fn bench_low_digits_path() {
        let (code, out, _) = run_str(&["bench", "3000", "--naive-limit", "10"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("low64"));
    }

    #[test]
    fn selector_errors() {
        assert_eq!(run_str(&["verify"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "--id", "Nope"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "--id", "Eq1", "--n", "3..1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "--id", "Eq1", "--n", "-1..1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "--id", "Eq1", "--seeds", "x"]).0, EXIT_USAGE);
    }

    #[test]
    fn verify_by_tag_and_negative_ranges() {
        let (code, out, _) = run_str(&["verify", "--id", "Eq(8)", "--m", "-3..3", "--n", "-3..3"]);
        assert_eq!(code, EXIT_PASS, "{out}");
        assert!(out.contains("PASS Eq8 [Eq(8)]"));
    }

    #[test]
    fn negative_seeds_do_not_swallow_flags() {
        let (code, out, err) = run_str(&["verify", "--id", "Case14", "--seeds", "-4,5", "3,7", "--format", "json", "--m", "0..1"]);
        assert_eq!(code, EXIT_PASS, "{err}");
        assert!(out.trim_start().starts_with('{'));
        let argv = ["x", "--seeds", "1,2", "-4,5", "--m", "-1..1"].map(OsString::from);
        let split: Vec<String> = split_seed_lists(argv).iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(split, ["x", "--seeds=1,2", "--seeds=-4,5", "--m", "-1..1"]);
    }

    #[test]
    fn prove_lemma() {
        let (code, out, _) = run_str(&["prove", "--id", "Lemma11"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("4 checked, 0 failed"));
    }

    #[test]
    fn catalog_listing() {
        let (code, out, _) = run_str(&["catalog"]);
        assert_eq!(code, EXIT_PASS);
        assert_eq!(out.lines().count(), 29);
        let (_, text, _) = run_str(&["catalog", "--text"]);
        assert_eq!(Catalog::parse(&text).unwrap(), builtin_catalog());
    }
}
