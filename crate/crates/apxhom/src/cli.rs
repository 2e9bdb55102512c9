//! Command-line front end.
//!
//! Subcommands: `prob`, `construct`, `bound`, `search`, `fuzz`,
//! `counterexample`. All reports are JSON (CSV where noted), probabilities
//! and other exact rationals are serialized as `"num/den"` strings with
//! decimal renderings alongside; the rational is authoritative.
//!
//! Exit codes: 0 success, 1 usage or parameter errors, 2 when a fuzz run
//! finds a violated inequality. Runs are deterministic for a fixed
//! configuration: seeds default to 0 and worker count never affects
//! output.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds;
use crate::error::{Error, Result};
use crate::fuzz::{self, FuzzConfig};
use crate::group::GroupSpec;
use crate::lemmas;
use crate::maps::{binary_embedding, centered_unwrap, PointMap};
use crate::search;

/// Parses the bracketed group spec text format, e.g. `[2^4]` or `[4,0]`.
pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    text.parse()
}

/// RFC 4180 CSV with a header row.
pub fn emit_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    wtr.write_record(header).expect("in-memory csv");
    for row in rows {
        wtr.write_record(row).expect("in-memory csv");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory csv")).expect("csv is utf8")
}

#[derive(Debug, Parser)]
#[command(
    name = "apxhom",
    version,
    about = "Exact agreement counting, bounds and sumset-lemma checks for approximate homomorphisms between finite Abelian groups"
)]
pub struct Cli {
    /// Cap the worker-thread count; output is identical for any cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact agreement probability of a construction or a stored map.
    Prob(ProbArgs),
    /// Build a construction and emit its map serialization.
    Construct(ConstructArgs),
    /// Evaluate the bound base and exponent for a pair of groups.
    Bound(BoundArgs),
    /// Search for a maximum-agreement injection.
    Search(SearchArgs),
    /// Run a randomized checker suite (JSON lines; exit 2 on violations).
    Fuzz(FuzzArgs),
    /// Enumerate the dilation-vs-doubling counterexample family.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    /// Binary embedding (Z/2Z)^n -> Z/pZ, needs --n and --p.
    Binary,
    /// Centered unwrapping Z/pZ -> Z/qZ, needs --p and --q.
    Unwrap,
}

#[derive(Debug, Args)]
pub struct ProbArgs {
    /// Construction to evaluate.
    #[arg(long)]
    pub construct: Option<ConstructKind>,
    /// Path to a map JSON produced by `construct` (alternative to --construct).
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Which construction to build.
    #[arg(value_enum)]
    pub kind: ConstructKind,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Domain group spec, e.g. `[2^4]`.
    #[arg(long = "G")]
    pub g: String,
    /// Codomain group spec, e.g. `[17]`.
    #[arg(long = "H")]
    pub h: String,
    /// Dilation parameter: a positive integer, or `auto` to scan 2..=64
    /// for the smallest bound value.
    #[arg(long, default_value = "2")]
    pub r: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exhaustive,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long = "G")]
    pub g: String,
    #[arg(long = "H")]
    pub h: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Exhaustive)]
    pub method: MethodArg,
    /// Move-evaluation budget for the local method.
    #[arg(long, default_value_t = 100_000)]
    pub iterations: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Warm-start construction for the local method; parameters are
    /// inferred from the specs.
    #[arg(long, value_enum)]
    pub warm: Option<ConstructKind>,
    /// Bound-context rows cover r in [r-min, r-max].
    #[arg(long = "r-min", default_value_t = 1)]
    pub r_min: u64,
    #[arg(long = "r-max", default_value_t = 8)]
    pub r_max: u64,
    /// `json` for the full result, `csv` for the bound comparison table.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckerArg {
    GraphGrowth,
    Bukh,
    Ruzsa,
    Petridis,
    KernelQuotient,
    Bsg,
}

impl From<CheckerArg> for fuzz::Checker {
    fn from(c: CheckerArg) -> fuzz::Checker {
        match c {
            CheckerArg::GraphGrowth => fuzz::Checker::GraphGrowth,
            CheckerArg::Bukh => fuzz::Checker::Bukh,
            CheckerArg::Ruzsa => fuzz::Checker::Ruzsa,
            CheckerArg::Petridis => fuzz::Checker::Petridis,
            CheckerArg::KernelQuotient => fuzz::Checker::KernelQuotient,
            CheckerArg::Bsg => fuzz::Checker::Bsg,
        }
    }
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, value_enum)]
    pub checker: CheckerArg,
    /// Trial count; defaults to the checker's suite size.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cap on generated (domain) group orders.
    #[arg(long = "max-group")]
    pub max_group: Option<u64>,
    /// Cap on generated codomain orders (graph-growth only).
    #[arg(long = "max-codomain")]
    pub max_codomain: Option<u64>,
    /// Cap on generated set sizes.
    #[arg(long = "max-set")]
    pub max_set: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// Family parameter; the ambient group is (Z/4Z)^d x Z.
    #[arg(long)]
    pub d: u32,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

/// Entry point for the binary: parse, run, map errors to exit codes.
pub fn run_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let out = cli.out.clone();
    match execute(cli) {
        Ok((text, code)) => {
            if let Err(e) = write_output(&out, &text) {
                eprintln!("error: {e}");
                return 1;
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                f.write_all(b"\n")?;
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                lock.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

/// Runs a parsed command and returns the report text plus the exit code.
pub fn execute(cli: Cli) -> Result<(String, i32)> {
    if let Some(threads) = cli.threads {
        // a second invocation in-process keeps the first pool; fine either
        // way since results never depend on the worker count
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match cli.command {
        Command::Prob(args) => cmd_prob(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Search(args) => cmd_search(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Counterexample(args) => cmd_counterexample(args),
    }
}

fn require<T>(value: Option<T>, field: &str, context: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("--{field} is required for {context}")))
}

fn build_construction(
    kind: ConstructKind,
    n: Option<u32>,
    p: Option<u64>,
    q: Option<u64>,
) -> Result<PointMap> {
    match kind {
        ConstructKind::Binary => {
            let n = require(n, "n", "the binary construction")?;
            let p = require(p, "p", "the binary construction")?;
            binary_embedding(n, p)
        }
        ConstructKind::Unwrap => {
            let p = require(p, "p", "the unwrap construction")?;
            let q = require(q, "q", "the unwrap construction")?;
            centered_unwrap(p, q)
        }
    }
}

fn cmd_prob(args: ProbArgs) -> Result<(String, i32)> {
    let map = match (args.construct, &args.map) {
        (Some(kind), None) => build_construction(kind, args.n, args.p, args.q)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            PointMap::from_json(&serde_json::from_str(&text)?)?
        }
        _ => {
            return Err(Error::InvalidParameter(
                "prob needs exactly one of --construct or --map".into(),
            ))
        }
    };
    let report = map.agreement_probability();
    let mut v = report.to_json();
    v["domain"] = Value::from(map.domain().to_string());
    v["codomain"] = Value::from(map.codomain().to_string());
    Ok((serde_json::to_string_pretty(&v)?, 0))
}

fn cmd_construct(args: ConstructArgs) -> Result<(String, i32)> {
    let map = build_construction(args.kind, args.n, args.p, args.q)?;
    Ok((serde_json::to_string_pretty(&map.to_json())?, 0))
}

fn cmd_bound(args: BoundArgs) -> Result<(String, i32)> {
    let g = parse_spec(&args.g)?;
    let h = parse_spec(&args.h)?;
    let report = if args.r == "auto" {
        let mut best: Option<bounds::BoundReport> = None;
        for r in 2..=64 {
            let cand = bounds::bound_report(&g, &h, r)?;
            best = match best {
                None => Some(cand),
                Some(cur) => {
                    let better = bounds::cmp_bound_values(
                        &cand.base,
                        &cand.alpha,
                        &cur.base,
                        &cur.alpha,
                    ) == std::cmp::Ordering::Less;
                    Some(if better { cand } else { cur })
                }
            };
        }
        best.expect("nonempty scan")
    } else {
        let r: u64 = args.r.parse().map_err(|_| {
            Error::InvalidParameter(format!("--r must be a positive integer or 'auto', got '{}'", args.r))
        })?;
        bounds::bound_report(&g, &h, r)?
    };
    let mut v = report.to_json();
    v["G"] = Value::from(g.to_string());
    v["H"] = Value::from(h.to_string());
    Ok((serde_json::to_string_pretty(&v)?, 0))
}

fn cmd_search(args: SearchArgs) -> Result<(String, i32)> {
    let g = parse_spec(&args.g)?;
    let h = parse_spec(&args.h)?;
    if args.r_min == 0 || args.r_min > args.r_max {
        return Err(Error::InvalidParameter(
            "--r-min must satisfy 1 <= r-min <= r-max".into(),
        ));
    }
    let warm = match args.warm {
        None => None,
        Some(ConstructKind::Binary) => {
            let n = g.moduli().len() as u32;
            if g.moduli().iter().any(|&d| d != 2) || h.moduli().len() != 1 {
                return Err(Error::InvalidParameter(
                    "--warm binary needs G = [2^n] and H = [p]".into(),
                ));
            }
            Some(binary_embedding(n, h.moduli()[0])?)
        }
        Some(ConstructKind::Unwrap) => {
            if g.moduli().len() != 1 || h.moduli().len() != 1 {
                return Err(Error::InvalidParameter(
                    "--warm unwrap needs G = [p] and H = [q]".into(),
                ));
            }
            Some(centered_unwrap(g.moduli()[0], h.moduli()[0])?)
        }
    };
    let result = match args.method {
        MethodArg::Exhaustive => search::exhaustive_max_agreement(&g, &h)?,
        MethodArg::Local => search::local_search_max_agreement(
            &g,
            &h,
            args.iterations,
            args.seed,
            warm.as_ref(),
        )?,
    };
    let rs: Vec<u64> = (args.r_min..=args.r_max).collect();
    let table =
        search::bound_comparison_table(&g, &h, &rs, Some(result.best_probability.clone()))?;
    match args.format {
        FormatArg::Json => {
            let mut v = result.to_json();
            v["bound_context"] = table.to_json();
            Ok((serde_json::to_string_pretty(&v)?, 0))
        }
        FormatArg::Csv => {
            let observed = format!(
                "{}/{}",
                result.best_probability.numer(),
                result.best_probability.denom()
            );
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|row| {
                    vec![
                        row.r.to_string(),
                        format!("{}/{}", row.alpha.numer(), row.alpha.denom()),
                        format!("{}/{}", row.base.numer(), row.base.denom()),
                        row.bound_value.clone(),
                        row.side_used.as_str().to_string(),
                        observed.clone(),
                    ]
                })
                .collect();
            Ok((
                emit_csv(
                    &["r", "alpha", "base", "bound_value", "side_used", "observed_best"],
                    &rows,
                ),
                0,
            ))
        }
    }
}

fn cmd_fuzz(args: FuzzArgs) -> Result<(String, i32)> {
    let mut cfg = FuzzConfig::for_checker(args.checker.into());
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    cfg.seed = args.seed;
    if let Some(m) = args.max_group {
        if m < 2 {
            return Err(Error::InvalidParameter("--max-group must be >= 2".into()));
        }
        cfg.max_group_order = m;
    }
    if let Some(m) = args.max_codomain {
        if m < 2 {
            return Err(Error::InvalidParameter("--max-codomain must be >= 2".into()));
        }
        cfg.max_codomain_order = m;
    }
    if let Some(m) = args.max_set {
        if m == 0 {
            return Err(Error::InvalidParameter("--max-set must be >= 1".into()));
        }
        cfg.max_set_size = m;
    }
    if cfg.checker == fuzz::Checker::GraphGrowth && cfg.max_codomain_order < cfg.max_group_order
    {
        return Err(Error::InvalidParameter(
            "--max-codomain must be >= --max-group".into(),
        ));
    }

    let records = fuzz::run_suite(&cfg);
    let violations = fuzz::violation_count(&records);
    let mut lines = Vec::with_capacity(records.len() + 1);
    for r in &records {
        let mut line = r.detail.clone();
        line["trial"] = Value::from(r.index);
        line["ok"] = Value::from(r.ok);
        lines.push(serde_json::to_string(&line)?);
    }
    let summary = json!({
        "summary": {
            "checker": cfg.checker.as_str(),
            "trials": cfg.trials,
            "seed": cfg.seed,
            "violations": violations,
        }
    });
    lines.push(serde_json::to_string(&summary)?);
    Ok((lines.join("\n"), exit_code_for_violations(violations)))
}

/// Violation findings map to exit code 2; clean runs to 0.
pub fn exit_code_for_violations(violations: u64) -> i32 {
    if violations > 0 {
        2
    } else {
        0
    }
}

fn cmd_counterexample(args: CounterexampleArgs) -> Result<(String, i32)> {
    let stats = lemmas::counterexample_family(args.d)?;
    match args.format {
        FormatArg::Json => Ok((serde_json::to_string_pretty(&stats.to_json())?, 0)),
        FormatArg::Csv => {
            let row = vec![
                stats.d.to_string(),
                stats.size_a.to_string(),
                stats.size_2a.to_string(),
                stats.size_ab.to_string(),
                stats.size_2a2b.to_string(),
                format!("{}/{}", stats.ratio_first.numer(), stats.ratio_first.denom()),
                format!("{}/{}", stats.ratio_second.numer(), stats.ratio_second.denom()),
            ];
            Ok((
                emit_csv(
                    &[
                        "d",
                        "size_a",
                        "size_2a",
                        "size_a_plus_b",
                        "size_2a_plus_2b",
                        "ratio_first",
                        "ratio_second",
                    ],
                    &[row],
                ),
                0,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<(String, i32)> {
        execute(Cli::try_parse_from(args).expect("args parse"))
    }

    #[test]
    fn parse_spec_examples() {
        assert_eq!(parse_spec("[2^3,5]").unwrap().moduli(), &[2, 2, 2, 5]);
        assert_eq!(parse_spec("[4,0]").unwrap().moduli(), &[4, 0]);
        assert!(parse_spec("[1]").is_err());
        // round trip
        for s in ["[2^3,5]", "[4,0]", "[]", "[17]"] {
            let g = parse_spec(s).unwrap();
            assert_eq!(parse_spec(&g.to_string()).unwrap(), g);
        }
    }

    #[test]
    fn csv_quoting_is_rfc4180() {
        let text = emit_csv(
            &["a", "b"],
            &[vec!["plain".into(), "with,comma".into()],
              vec!["with\"quote".into(), "with\nnewline".into()]],
        );
        assert_eq!(
            text,
            "a,b\nplain,\"with,comma\"\n\"with\"\"quote\",\"with\nnewline\"\n"
        );
    }

    #[test]
    fn prob_binary_example() {
        let (out, code) = run(&["apxhom", "prob", "--construct", "binary", "--n", "2", "--p", "5"])
            .unwrap();
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["good_pairs"], 9);
        assert_eq!(v["total_pairs"], 16);
        assert_eq!(v["probability"], "9/16");

        // missing field diagnostics name the field
        let err = run(&["apxhom", "prob", "--construct", "binary", "--n", "2"]).unwrap_err();
        assert!(err.to_string().contains("--p"));
        let err = run(&["apxhom", "prob"]).unwrap_err();
        assert!(err.to_string().contains("--construct"));
    }

    #[test]
    fn construct_roundtrips_through_prob() {
        let (out, _) = run(&["apxhom", "construct", "unwrap", "--p", "5", "--q", "11"]).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        let map = PointMap::from_json(&v).unwrap();
        let rep = map.agreement_probability();
        assert_eq!(rep.good_pairs, num::BigUint::from(19u32));
    }

    #[test]
    fn bound_example() {
        let (out, code) = run(&[
            "apxhom", "bound", "--G", "[2^4]", "--H", "[17]", "--r", "2",
        ])
        .unwrap();
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["base"], "1/16");
        assert_eq!(v["alpha"], "1/11");
        assert_eq!(v["side_used"], "domain_dilated");

        let err = run(&["apxhom", "bound", "--G", "[2^4]", "--H", "[17]", "--r", "x"]).unwrap_err();
        assert!(err.to_string().contains("--r"));
    }

    #[test]
    fn bound_auto_scans() {
        let (out, _) = run(&[
            "apxhom", "bound", "--G", "[2^4]", "--H", "[17]", "--r", "auto",
        ])
        .unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        let r = v["r"].as_u64().unwrap();
        assert!((2..=64).contains(&r));
    }

    #[test]
    fn counterexample_example() {
        let (out, code) = run(&["apxhom", "counterexample", "--d", "2"]).unwrap();
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["size_a"], 20);
        assert_eq!(v["size_2a"], 8);
        assert_eq!(v["size_a_plus_b"], 32);
        assert_eq!(v["size_2a_plus_2b"], 20);

        let (csv, _) = run(&["apxhom", "counterexample", "--d", "2", "--format", "csv"]).unwrap();
        assert!(csv.starts_with("d,size_a"));
        assert!(csv.contains("2,20,8,32,20"));
    }

    #[test]
    fn search_json_and_csv() {
        let (out, code) = run(&[
            "apxhom", "search", "--G", "[2,2]", "--H", "[5]", "--method", "exhaustive",
        ])
        .unwrap();
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["best_probability"], "9/16");
        assert_eq!(v["bound_context"]["observed_best"], "9/16");

        let (csv, _) = run(&[
            "apxhom", "search", "--G", "[2,2]", "--H", "[5]", "--format", "csv",
            "--r-min", "1", "--r-max", "3",
        ])
        .unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "r,alpha,base,bound_value,side_used,observed_best"
        );
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn fuzz_runs_and_reports() {
        let (out, code) = run(&[
            "apxhom", "fuzz", "--checker", "ruzsa", "--trials", "10", "--seed", "7",
        ])
        .unwrap();
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 11); // 10 trials + summary
        let first: Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["trial"], 0);
        assert_eq!(first["ok"], true);
        let summary: Value = serde_json::from_str(lines[10]).unwrap();
        assert_eq!(summary["summary"]["violations"], 0);

        // byte-identical reruns
        let (again, _) = run(&[
            "apxhom", "fuzz", "--checker", "ruzsa", "--trials", "10", "--seed", "7",
        ])
        .unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn violation_exit_code() {
        assert_eq!(exit_code_for_violations(0), 0);
        assert_eq!(exit_code_for_violations(3), 2);
    }

    #[test]
    fn local_search_cli_with_warm_start() {
        let (out, code) = run(&[
            "apxhom", "search", "--G", "[2^3]", "--H", "[11]", "--method", "local",
            "--iterations", "3000", "--seed", "1", "--warm", "binary",
        ])
        .unwrap();
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        // warm start floor: (3/4)^3 = 27/64
        let parts: Vec<u64> = v["best_probability"]
            .as_str()
            .unwrap()
            .split('/')
            .map(|x| x.parse().unwrap())
            .collect();
        assert!(parts[0] * 64 >= parts[1] * 27);
    }
}
