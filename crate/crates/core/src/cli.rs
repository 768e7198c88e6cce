//! Batch command line: `apply`, `check`, `identities`, `verify`, `explore`.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check or engine
//! error, 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::graph::{parse, GeneralizedGraph};
use crate::identities::{enumerate_monomials, generate_identities, verify_catalog, Catalog};
use crate::numerics::{
    beta_derivative_check, beta_second_derivative_ratio, effective_beta_check, lambda_derivative_check,
    quenched_expect, rate_trend, KernelMode, NumericReport, QuadratureSpec,
};
use crate::operators::{big_delta, delta, fourth_order_check_with_mode, higher_order_explore, wick, DiagonalMode};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "replica-calculus", version, about = "Replica overlap graph calculus and SK oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply an operator word to a graph.
    Apply(ApplyArgs),
    /// Check Cδ⁴M = 3Δ²M for one monomial or a whole catalog.
    Check(CheckArgs),
    /// Export ΔM and Δ²M for a catalog.
    Identities(CatalogArgs),
    /// Run the numeric oracle suite.
    Verify(VerifyArgs),
    /// Compare Cδ^{2k}M with (2k-1)!! Δ^k M.
    Explore(ExploreArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagonal {
    Unit,
    Symbol,
    Kernel,
}

impl From<Diagonal> for DiagonalMode {
    fn from(d: Diagonal) -> Self {
        match d {
            Diagonal::Unit => DiagonalMode::Unit,
            Diagonal::Symbol => DiagonalMode::Symbol,
            Diagonal::Kernel => DiagonalMode::Kernel,
        }
    }
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    #[arg(long)]
    pub graph: String,
    /// Word over d, C and D (= Cdd), applied right to left.
    #[arg(long)]
    pub op: String,
    #[arg(long, value_enum, default_value_t = Diagonal::Unit)]
    pub diagonal: Diagonal,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// A single monomial; omit to check the catalog.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub max_edges: usize,
    #[arg(long, default_value_t = 12)]
    pub max_vertices: usize,
    #[arg(long, value_enum, default_value_t = Diagonal::Unit)]
    pub diagonal: Diagonal,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[arg(long, default_value_t = 3)]
    pub max_edges: usize,
    #[arg(long, default_value_t = 12)]
    pub max_vertices: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Monomial to test; defaults to (1,2).
    #[arg(long)]
    pub graph: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ExploreArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Settings read by `verify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub beta: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    pub lambda_step: f64,
    pub beta_step: f64,
    pub quad_nodes: usize,
    pub mc_samples: usize,
    pub seed: u64,
    pub kernel: KernelMode,
}

fn default_lambda() -> f64 {
    0.5
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            n: 3,
            beta: 0.5,
            lambda: default_lambda(),
            lambda_step: 0.05,
            beta_step: 1e-3,
            quad_nodes: 20,
            mc_samples: 0,
            seed: 12345,
            kernel: KernelMode::Exact,
        }
    }
}

impl NumericConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Wire(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Wire(format!("bad config {}: {e}", path.display())))
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            nodes_per_dim: self.quad_nodes,
            mc_samples: self.mc_samples,
            seed: self.seed,
            ..QuadratureSpec::default()
        }
    }
}

struct Outcome {
    text: String,
    pass: bool,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    let output = match &cli.command {
        Command::Apply(a) => a.output.clone(),
        Command::Check(a) => a.output.clone(),
        Command::Identities(a) => a.output.clone(),
        Command::Verify(a) => a.output.clone(),
        Command::Explore(a) => a.output.clone(),
    };
    let result = execute(&cli.command, output.format);
    match result {
        Ok(outcome) => {
            let written = match &output.out {
                Some(path) => std::fs::write(path, &outcome.text).map_err(|e| e.to_string()),
                None => stdout.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return EXIT_FAIL;
            }
            if outcome.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAIL
        }
    }
}

fn execute(command: &Command, format: Format) -> Result<Outcome> {
    match command {
        Command::Apply(a) => apply(a, format),
        Command::Check(a) => check(a, format),
        Command::Identities(a) => identities(a, format),
        Command::Verify(a) => verify(a, format),
        Command::Explore(a) => explore(a, format),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Wire(e.to_string()))
}

/// Applies an operator word such as `"Cdddd"` or `"DD"`, rightmost first.
pub fn apply_word(word: &str, p: &Polynomial, mode: DiagonalMode) -> Result<Polynomial> {
    let mut current = p.clone();
    for (i, c) in word.char_indices().rev() {
        current = match c {
            'd' => delta(&current)?,
            'C' => wick(&current, mode)?,
            'D' => big_delta(&current, mode)?,
            other => return Err(Error::parse(i, format!("unknown operator {other:?} (expected d, C or D)"))),
        };
    }
    Ok(current)
}

fn apply(a: &ApplyArgs, format: Format) -> Result<Outcome> {
    let input = Polynomial::monomial(&parse(&a.graph)?)?;
    let result = apply_word(&a.op, &input, a.diagonal.into())?;
    let text = match format {
        Format::Text => format!("{result}\n"),
        Format::Json => json(&result)?,
    };
    Ok(Outcome { text, pass: true })
}

fn catalog(max_edges: usize, max_vertices: usize) -> Result<Catalog> {
    enumerate_monomials(max_edges, max_vertices)
}

fn check(a: &CheckArgs, format: Format) -> Result<Outcome> {
    if let Some(g) = &a.graph {
        let report = fourth_order_check_with_mode(&parse(g)?, a.diagonal.into())?;
        let text = match format {
            Format::Text => format!(
                "{}: {}, residual {}\n",
                report.monomial,
                verdict(report.pass),
                report.residual
            ),
            Format::Json => json(&report)?,
        };
        return Ok(Outcome { text, pass: report.pass });
    }
    if a.diagonal != Diagonal::Unit {
        return Err(Error::domain("catalog checks use the unit diagonal"));
    }
    let report = verify_catalog(&catalog(a.max_edges, a.max_vertices)?);
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            for e in &report.entries {
                match &e.error {
                    Some(err) => writeln!(s, "{}: fail, {err}", e.monomial),
                    None => writeln!(
                        s,
                        "{}: {}, residual {}",
                        e.monomial,
                        verdict(e.pass),
                        e.residual.as_ref().map(ToString::to_string).unwrap_or_default()
                    ),
                }
                .expect("write to string");
            }
            writeln!(s, "{}/{} passed", report.passed, report.checked).expect("write to string");
            s
        }
        Format::Json => json(&report)?,
    };
    Ok(Outcome { text, pass: report.pass })
}

fn identities(a: &CatalogArgs, format: Format) -> Result<Outcome> {
    let records = generate_identities(&catalog(a.max_edges, a.max_vertices)?)?;
    let pass = records.iter().all(|r| r.zero_sum_ok);
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            for r in &records {
                writeln!(s, "M = {}", r.monomial).expect("write to string");
                writeln!(s, "  ΔM  = {}", r.delta).expect("write to string");
                writeln!(s, "  Δ²M = {}", r.delta2).expect("write to string");
                for note in &r.notes {
                    writeln!(s, "  note: {note}").expect("write to string");
                }
            }
            s
        }
        Format::Json => json(&records)?,
    };
    Ok(Outcome { text, pass })
}

/// The oracle suite for one monomial.
pub fn verify_suite(m: &GeneralizedGraph, config: &NumericConfig) -> Result<Vec<NumericReport>> {
    let quad = config.quadrature();
    let (n, beta) = (config.n, config.beta);
    let mut reports = Vec::new();
    let p = Polynomial::monomial(m)?;
    let value = quenched_expect(&p, n, beta, &quad, config.kernel)?;
    reports.push(beta_derivative_check(m, n, beta, config.beta_step, &quad)?);
    if n <= 3 {
        reports.push(effective_beta_check(m, n, beta, config.lambda, &quad)?);
        for k in [2, 4] {
            reports.push(lambda_derivative_check(m, n, beta, k, config.lambda_step, &quad)?);
        }
    }
    reports.push(beta_second_derivative_ratio(m, n, beta, config.beta_step, &quad)?);
    let sizes: Vec<usize> = (2..=n).collect();
    reports.push(rate_trend(m, &sizes, beta, &quad)?);
    for r in &mut reports {
        r.inputs.insert("quenched_value".into(), serde_json::json!(value));
        r.inputs.insert("kernel".into(), serde_json::json!(config.kernel));
    }
    Ok(reports)
}

fn verify(a: &VerifyArgs, format: Format) -> Result<Outcome> {
    let config = match &a.config {
        Some(path) => NumericConfig::from_path(path)?,
        None => NumericConfig::default(),
    };
    let m = parse(a.graph.as_deref().unwrap_or("(1,2)"))?;
    let reports = verify_suite(&m, &config)?;
    let pass = reports.iter().all(|r| r.pass);
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                writeln!(s, "{}", report_line(r)).expect("write to string");
            }
            s
        }
        Format::Json => json(&reports)?,
    };
    Ok(Outcome { text, pass })
}

/// One-line text summary of a numeric report.
pub fn report_line(r: &NumericReport) -> String {
    let mut s = format!("{:<30} {}", r.check, verdict(r.pass));
    let num = |x: Option<f64>| x.map(|v| format!("{v:.12e}")).unwrap_or_else(|| "-".into());
    match r.check.as_str() {
        "rate_trend" => {
            for row in &r.rows {
                write!(s, "  N={} E(ΔM)={:.6e} E(Δ²M)={:.6e}", row.n, row.delta, row.delta2).expect("write to string");
            }
        }
        _ => write!(
            s,
            "  lhs={} rhs={} ratio={} rel_error={}",
            num(r.lhs),
            num(r.rhs),
            num(r.ratio),
            r.rel_error.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into())
        )
        .expect("write to string"),
    }
    for note in &r.notes {
        write!(s, "  [{note}]").expect("write to string");
    }
    s
}

fn explore(a: &ExploreArgs, format: Format) -> Result<Outcome> {
    let report = higher_order_explore(&parse(&a.graph)?, a.order)?;
    let pass = !report.asserted || report.residual_is_zero;
    let text = match format {
        Format::Text => format!(
            "{}: Cδ^{} vs {}·Δ^{}: residual {}{}\n",
            report.monomial,
            2 * report.order,
            report.multiplier,
            report.order,
            report.residual,
            if report.asserted { "" } else { " (exploratory, no verdict)" }
        ),
        Format::Json => json(&report)?,
    };
    Ok(Outcome { text, pass })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}
