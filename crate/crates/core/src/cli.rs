//! The `heyde-lab` command line.
//!
//! Exit codes: 0 verdict true or all checks passed, 1 verdict false or a
//! check failed, 2 usage or schema error, 3 exact and approximate verdicts
//! disagree.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::io::{parse_endomorphism, parse_group, parse_instance};
use crate::predicates::{
    are_forms_independent, canonicalize, derived_forms, heyde_equation_residual, independence_equation_residual,
    is_conditionally_symmetric, symmetry_witness, FormsInstance, DEFAULT_TOL,
};
use crate::search::{grid_scan, padic_scan, SearchConfig, SymmetryReport, TAG_THEOREM_B_VIOLATION};
use crate::verify::{run_suite, PADIC_SUPPORT_CAP, SUITES};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "HEYDE_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "heyde-lab", version, about = "Conditional symmetry of linear forms on finite abelian groups")]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every predicate on one instance file.
    Check {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tolerance: f64,
    },
    /// Scan distribution pairs for a group and coefficient.
    Search {
        group: PathBuf,
        alpha: PathBuf,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Scan Z/p^k with alpha = multiplication by c.
    Padic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        c: u64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Run property suites.
    Verify {
        /// Suite name, repeatable; `all` selects every suite.
        #[arg(long, required = true)]
        suite: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to 3, or 2 for `padic`.
    #[arg(long)]
    support_cap: Option<usize>,
    #[arg(long, default_value_t = 6)]
    denominator_cap: u64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

impl ScanArgs {
    fn config(&self, default_cap: usize) -> SearchConfig {
        SearchConfig {
            support_size_cap: self.support_cap.unwrap_or(default_cap),
            denominator_cap: self.denominator_cap,
            random_trials: self.trials,
            seed: self.seed,
        }
    }
}

/// Embedded in every report; identical manifests give identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub config: Value,
    pub version: String,
    /// `SOURCE_DATE_EPOCH` when set, otherwise the current unix time.
    pub timestamp: u64,
}

impl RunManifest {
    fn new(command: &str, inputs: &[&Path], config: Value) -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        Self {
            command: command.to_string(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Disagreement(_) => EXIT_DISAGREEMENT,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Report lines plus the exit code they imply.
struct Output {
    lines: Vec<String>,
    code: i32,
}

fn line(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("serializable report")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message);
        return f.code;
    }
    let result = match &cli.command {
        Command::Check { instance, tolerance } => cmd_check(instance, *tolerance),
        Command::Search { group, alpha, scan } => cmd_search(group, alpha, scan),
        Command::Padic { p, k, c, scan } => cmd_padic(*p, *k, *c, scan),
        Command::Verify { suite, seed } => cmd_verify(suite, *seed),
    };
    match result.and_then(|out| emit(cli.out.as_deref(), &out.lines).map(|_| out.code)) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // a pool already built by an earlier call in the same process is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(out: Option<&Path>, lines: &[String]) -> Result<(), Failure> {
    let mut text = lines.join("\n");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("stdout: {e}"))),
    }
}

/// The canonical instance a general-forms instance reduces to, when it does.
fn canonical_view(inst: &FormsInstance) -> Result<Option<FormsInstance>, Failure> {
    if inst.is_canonical() {
        return Ok(Some(inst.clone()));
    }
    match canonicalize(inst) {
        Ok(c) => Ok(Some(c.instance)),
        Err(Error::NotAutomorphism) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn cmd_check(path: &Path, tolerance: f64) -> Result<Output, Failure> {
    let inst = parse_instance(&read(path)?)?;
    let manifest = RunManifest::new("check", &[path], json!({ "tolerance": tolerance }));
    let symmetric = is_conditionally_symmetric(&inst);
    let witness = symmetry_witness(&inst).map(|(s, t)| json!({ "s": s, "t": t }));
    let canonical = canonical_view(&inst)?;

    let mut report = json!({
        "manifest": manifest,
        "instance": inst,
        "symmetric": symmetric,
        "witness": witness,
    });
    let mut agree = true;
    match &canonical {
        Some(c) => {
            let (residual, _) = heyde_equation_residual(c)?;
            let eq42 = residual <= tolerance;
            agree &= eq42 == symmetric;
            let m = derived_forms(c)?;
            let independent = are_forms_independent(&m);
            let eq4_residual = independence_equation_residual(&m);
            let eq4 = eq4_residual <= tolerance;
            agree &= eq4 == independent;
            let summary = SymmetryReport::evaluate(c)?;
            report["eq42"] = json!(eq42);
            report["eq42_residual"] = json!(residual);
            report["eq42_agrees"] = json!(eq42 == symmetric);
            report["m_forms_independent"] = json!(independent);
            report["eq4"] = json!(eq4);
            report["eq4_residual"] = json!(eq4_residual);
            report["eq4_agrees"] = json!(eq4 == independent);
            report["kernel"] = json!(summary.kernel);
            report["tags"] = json!(summary.tags);
            if symmetric {
                report["classifications"] = json!([summary.classification1, summary.classification2]);
            }
            if !inst.is_canonical() {
                report["canonical_alpha"] = json!(c.alpha()?);
            }
        }
        None => {
            report["eq42"] = Value::Null;
            report["kernel"] = Value::Null;
            if symmetric {
                report["classifications"] = json!([inst.mu1.classify(), inst.mu2.classify()]);
            }
        }
    }
    let code = if !agree {
        EXIT_DISAGREEMENT
    } else if symmetric {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    };
    Ok(Output {
        lines: vec![line(&report)],
        code,
    })
}

fn cmd_search(group_path: &Path, alpha_path: &Path, scan: &ScanArgs) -> Result<Output, Failure> {
    let group = parse_group(&read(group_path)?)?;
    let alpha = parse_endomorphism(&group, &read(alpha_path)?)?;
    let config = scan.config(SearchConfig::default().support_size_cap);
    let manifest = RunManifest::new("search", &[group_path, alpha_path], json!(config));
    let outcome = grid_scan(&alpha, &config)?;
    let mut lines = vec![line(&json!({ "manifest": manifest }))];
    lines.extend(outcome.reports.iter().map(line));
    lines.push(line(&json!({ "summary": outcome.summary })));
    let violation = outcome.reports.iter().any(|r| r.has_tag(TAG_THEOREM_B_VIOLATION));
    Ok(Output {
        lines,
        code: if violation { EXIT_FALSE } else { EXIT_TRUE },
    })
}

fn cmd_padic(p: u64, k: u32, c: u64, scan: &ScanArgs) -> Result<Output, Failure> {
    let config = scan.config(PADIC_SUPPORT_CAP);
    let manifest = RunManifest::new("padic", &[], json!({ "p": p, "k": k, "c": c, "search": config }));
    let report = padic_scan(p, k, c, &config)?;
    let mut lines = vec![line(&json!({ "manifest": manifest }))];
    lines.extend(report.outcome.reports.iter().map(line));
    lines.push(line(&json!({
        "padic": {
            "p": report.p,
            "k": report.k,
            "c": report.c,
            "c0": report.c0,
            "c1": report.c1,
            "kernel": report.kernel,
            "case": report.case,
            "consistent": report.consistent,
            "non_idempotent_hits": report.non_idempotent_hits,
            "construction": report.construction,
        },
        "summary": report.outcome.summary,
    })));
    Ok(Output {
        lines,
        code: if report.consistent { EXIT_TRUE } else { EXIT_FALSE },
    })
}

fn cmd_verify(requested: &[String], seed: u64) -> Result<Output, Failure> {
    let mut names: Vec<&str> = Vec::new();
    for s in requested {
        if s == "all" {
            names.extend(SUITES);
        } else if SUITES.contains(&s.as_str()) {
            names.push(s);
        } else {
            return Err(usage(format!("unknown suite {s:?}; expected one of {}", SUITES.join(", "))));
        }
    }
    let manifest = RunManifest::new("verify", &[], json!({ "suites": names, "seed": seed }));
    let mut lines = vec![line(&json!({ "manifest": manifest }))];
    let mut all = true;
    for name in names {
        let r = run_suite(name, seed)?;
        eprintln!("{} {} ({} checks)", if r.passed { "PASS" } else { "FAIL" }, r.suite, r.checks);
        all &= r.passed;
        lines.push(line(&r));
    }
    lines.push(line(&json!({ "passed": all })));
    Ok(Output {
        lines,
        code: if all { EXIT_TRUE } else { EXIT_FALSE },
    })
}
