//! Command-line front end. Every verb produces one [`OutputRecord`]; JSON is
//! the default rendering and `--text` flattens the same record into labeled
//! lines.

use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use brieskorn::delta_tau::tau_profile;
use brieskorn::invariants::torus_knot_report;
use brieskorn::obstruction::{branched_rational_ball_verdict, free_rational_ball_verdict, positive_definite_verdict};
use brieskorn::sweep::{run_scan, Check, ScanConfig};
use brieskorn::table1::reproduce_table1;
use brieskorn::{
    build_root, tower_decomposition, BranchedReport, BrieskornExponents, InvariantReport, QuotientReport, SeifertData,
};

pub const SCHEMA_VERSION: &str = "1";

/// Largest magnitude a double-backed JSON reader holds exactly.
const SAFE_INTEGER: u64 = 1 << 53;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] brieskorn::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot encode output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(_) => 2,
            CliError::Usage(_) | CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

/// Successful runs either pass or report failed property checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    CheckFailed,
}

#[derive(Debug, Parser)]
#[command(name = "brieskorn", version, about = "Floer-theoretic invariants of Brieskorn homology spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit labeled plain-text lines.
    #[arg(long, global = true)]
    pub text: bool,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct Exponents {
    /// Pairwise coprime exponents, at least three.
    #[arg(required = true, num_args = 3.., value_name = "EXPONENT")]
    pub exponents: Vec<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of a single Brieskorn sphere.
    Invariants(Exponents),
    /// Compare with the quotient by a free Z_p action.
    Quotient {
        #[command(flatten)]
        exponents: Exponents,
        #[arg(long)]
        prime: u64,
    },
    /// Compare with the quotient by a Z_p action with fixed points.
    Branched {
        #[command(flatten)]
        exponents: Exponents,
        #[arg(long)]
        prime: u64,
    },
    /// Equivariant invariants of the torus knot T(a,b) under Z_c.
    TorusKnot {
        a: u64,
        b: u64,
        #[arg(long)]
        prime: u64,
    },
    /// Recompute the reference rank table and diff it.
    Table1,
    /// Run property suites over every coprime triple up to a product bound.
    Scan {
        #[arg(long, value_name = "P")]
        max_product: u64,
        /// Inclusive prime range, written `LO..HI`.
        #[arg(long, value_name = "LO..HI", value_parser = parse_range, default_value = "2..37")]
        primes: (u64, u64),
        /// Suites to run; repeatable.
        #[arg(long = "check", value_name = "NAME", value_parser = parse_checks, default_value = "all")]
        checks: Vec<Vec<Check>>,
    },
    /// Graded root of the (scaled) tau profile.
    Root {
        #[command(flatten)]
        exponents: Exponents,
        #[arg(long, default_value_t = 1)]
        prime: u64,
        #[arg(long, value_enum, default_value_t = RootFormat::Json)]
        format: RootFormat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RootFormat {
    Dot,
    Json,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_checks(s: &str) -> Result<Vec<Check>, String> {
    if s == "all" {
        Ok(Check::ALL.to_vec())
    } else {
        Ok(vec![s.parse()?])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub payload: Value,
}

impl OutputRecord {
    fn new(command: &str, inputs: Value, payload: impl Serialize) -> Result<Self, CliError> {
        Ok(Self {
            schema_version: SCHEMA_VERSION.to_owned(),
            command: command.to_owned(),
            inputs: exact_integers(inputs),
            payload: exact_integers(serde_json::to_value(payload)?),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("values are plain JSON");
        s.push('\n');
        s
    }

    /// One `path: value` line per scalar, in field order.
    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("command: {}", self.command), format!("schema_version: {}", self.schema_version)];
        flatten("inputs", &self.inputs, &mut lines);
        flatten("payload", &self.payload, &mut lines);
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

/// Replaces integers beyond `±2^53` by their decimal strings.
pub fn exact_integers(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let big = match (n.as_u64(), n.as_i64()) {
                (Some(u), _) => u > SAFE_INTEGER,
                (None, Some(i)) => i.unsigned_abs() > SAFE_INTEGER,
                _ => false,
            };
            if big {
                Value::String(n.to_string())
            } else {
                Value::Number(n)
            }
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(exact_integers).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, exact_integers(v))).collect()),
        other => other,
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_owned(),
        other => other.to_string(),
    }
}

fn flatten(path: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{path}.{k}"), x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(is_scalar) => {
            let items: Vec<String> = xs.iter().map(scalar_text).collect();
            out.push(format!("{path}: [{}]", items.join(", ")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        scalar => out.push(format!("{path}: {}", scalar_text(scalar))),
    }
}

/// Renders a command to its output text and outcome without touching stdout.
pub fn render(cli: &Cli) -> Result<(String, Outcome), CliError> {
    if let Command::Root { exponents, prime, format: RootFormat::Dot } = &cli.command {
        let a = BrieskornExponents::new(exponents.exponents.clone())?;
        let tp = tau_profile(&SeifertData::new(&a), *prime)?;
        let name = if *prime == 1 { a.to_string() } else { format!("{a}/Z_{prime}") };
        return Ok((build_root(&tp).to_dot(&name), Outcome::Success));
    }
    let (record, outcome) = execute(&cli.command, cli.workers)?;
    let text = if cli.text { record.to_text() } else { record.to_json() };
    Ok((text, outcome))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let (text, outcome) = render(cli)?;
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(outcome)
}

fn exponents_of(e: &Exponents) -> Result<BrieskornExponents, CliError> {
    Ok(BrieskornExponents::new(e.exponents.clone())?)
}

/// Builds the record for any verb. DOT export is rendered by [`render`].
pub fn execute(command: &Command, workers: usize) -> Result<(OutputRecord, Outcome), CliError> {
    let ok = |r: OutputRecord| Ok((r, Outcome::Success));
    match command {
        Command::Invariants(e) => {
            let a = exponents_of(e)?;
            let report = InvariantReport::compute(&a)?;
            let payload = json!({
                "report": report,
                "module_abs_minus_sigma": report.module_abs(),
                "rank_identity_holds": report.rank_identity_holds(),
                "j_prime_holds": report.j_prime_holds(),
            });
            ok(OutputRecord::new("invariants", json!({ "exponents": e.exponents }), payload)?)
        }
        Command::Quotient { exponents: e, prime } => {
            let a = exponents_of(e)?;
            let report = QuotientReport::compute(&a, *prime)?;
            let mut verdicts = vec![free_rational_ball_verdict(&a, *prime)?];
            if a.triple().is_some() {
                verdicts.push(positive_definite_verdict(&a, *prime)?);
            }
            let payload = json!({ "report": report, "verdicts": verdicts });
            ok(OutputRecord::new("quotient", json!({ "exponents": e.exponents, "prime": prime }), payload)?)
        }
        Command::Branched { exponents: e, prime } => {
            let a = exponents_of(e)?;
            let report = BranchedReport::compute(&a, *prime)?;
            let mut verdicts = vec![branched_rational_ball_verdict(&a, *prime)?];
            if a.triple().is_some() {
                verdicts.push(positive_definite_verdict(&a, *prime)?);
            }
            let payload = json!({ "report": report, "verdicts": verdicts });
            ok(OutputRecord::new("branched", json!({ "exponents": e.exponents, "prime": prime }), payload)?)
        }
        Command::TorusKnot { a, b, prime } => {
            let report = torus_knot_report(*a, *b, *prime)?;
            ok(OutputRecord::new("torus-knot", json!({ "a": a, "b": b, "prime": prime }), report)?)
        }
        Command::Table1 => {
            let cmp = reproduce_table1()?;
            let status = if cmp.passed() { "PASS" } else { "FAIL" };
            let outcome = if cmp.passed() { Outcome::Success } else { Outcome::CheckFailed };
            let payload = json!({ "status": status, "rows": cmp.rows, "mismatches": cmp.mismatches });
            Ok((OutputRecord::new("table1", json!({}), payload)?, outcome))
        }
        Command::Scan { max_product, primes, checks } => {
            let mut cfg = ScanConfig::new(*max_product, *primes, checks.iter().flatten().copied());
            cfg.workers = workers;
            let report = run_scan(&cfg)?;
            let outcome = if report.passed() { Outcome::Success } else { Outcome::CheckFailed };
            let inputs = json!({
                "max_product": max_product,
                "primes": [primes.0, primes.1],
                "checks": cfg.checks.iter().map(|c| c.name()).collect::<Vec<_>>(),
            });
            Ok((OutputRecord::new("scan", inputs, report)?, outcome))
        }
        Command::Root { exponents: e, prime, .. } => {
            let a = exponents_of(e)?;
            let tp = tau_profile(&SeifertData::new(&a), *prime)?;
            let root = build_root(&tp);
            let module = tower_decomposition(&root);
            let mut payload = Map::new();
            payload.insert("domain_end".into(), json!(tp.domain_end));
            payload.insert("min_tau".into(), json!(tp.min_tau()));
            payload.insert("leaf_count".into(), json!(root.leaf_count()));
            payload.insert("extrema".into(), serde_json::to_value(root.extrema())?);
            payload.insert("module_rel".into(), serde_json::to_value(&module)?);
            ok(OutputRecord::new("root", json!({ "exponents": e.exponents, "prime": prime }), payload)?)
        }
    }
}
