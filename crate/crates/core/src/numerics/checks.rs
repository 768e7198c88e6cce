//! Finite-N checks of the derivative identities against the symbolic
//! engine.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::graph::GeneralizedGraph;
use crate::numerics::expect::{averaged_deformed_expect_many, quenched_expect, quenched_expect_many};
use crate::numerics::model::KernelMode;
use crate::numerics::quadrature::QuadratureSpec;
use crate::operators::{big_delta, wick_delta_power, DiagonalMode};

pub const LAMBDA_TOLERANCE: f64 = 1e-3;
pub const BETA_TOLERANCE: f64 = 1e-4;
pub const RATIO_TOLERANCE: f64 = 1e-2;
pub const EFFECTIVE_BETA_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_LAMBDA_STEP: f64 = 0.05;
pub const DEFAULT_BETA_STEP: f64 = 1e-3;

/// Errors are measured relative to `max(|rhs|, REL_FLOOR)`.
const REL_FLOOR: f64 = 1e-12;

/// Outcome of one numeric check.
#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub check: String,
    pub inputs: BTreeMap<String, Value>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub ratio: Option<f64>,
    pub rel_error: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<RateRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl NumericReport {
    fn new(check: &str, inputs: Value) -> Self {
        let inputs = match inputs {
            Value::Object(map) => map.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        NumericReport {
            check: check.to_string(),
            inputs,
            lhs: None,
            rhs: None,
            ratio: None,
            rel_error: None,
            tolerance: None,
            pass: false,
            details: BTreeMap::new(),
            rows: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn compare(mut self, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let err = relative_error(lhs, rhs);
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self.ratio = (rhs != 0.0).then(|| lhs / rhs);
        self.rel_error = Some(err);
        self.tolerance = Some(tolerance);
        self.pass = err <= tolerance;
        self
    }
}

pub fn relative_error(lhs: f64, rhs: f64) -> f64 {
    if lhs == rhs {
        0.0
    } else {
        (lhs - rhs).abs() / rhs.abs().max(REL_FLOOR)
    }
}

/// 5-point central first derivative from `f(x-2h), f(x-h), f(x+h), f(x+2h)`.
pub fn first_derivative(fm2: f64, fm1: f64, fp1: f64, fp2: f64, h: f64) -> f64 {
    ((fm2 - fp2) + 8.0 * (fp1 - fm1)) / (12.0 * h)
}

/// 5-point central second derivative.
pub fn second_derivative(fm2: f64, fm1: f64, f0: f64, fp1: f64, fp2: f64, h: f64) -> f64 {
    (16.0 * ((fm1 - f0) + (fp1 - f0)) - ((fm2 - f0) + (fp2 - f0))) / (12.0 * h * h)
}

/// 5-point central fourth derivative.
pub fn fourth_derivative(fm2: f64, fm1: f64, f0: f64, fp1: f64, fp2: f64, h: f64) -> f64 {
    ((fm2 - f0) + (fp2 - f0) - 4.0 * ((fm1 - f0) + (fp1 - f0))) / h.powi(4)
}

/// Eliminates the leading `h^order` error term from estimates at `h` and `2h`.
pub fn richardson(at_h: f64, at_2h: f64, order: i32) -> f64 {
    let f = 2f64.powi(order);
    (f * at_h - at_2h) / (f - 1.0)
}

fn leg_free_monomial(m: &GeneralizedGraph) -> Result<Polynomial> {
    if !m.is_leg_free() {
        return Err(Error::domain(format!("expected an overlap monomial, got {m}")));
    }
    Polynomial::monomial(m)
}

/// `∂_λ^k Av_J deformedExpect(M, λ)` at `λ = 0` by finite differences
/// against `E(Cδ^k M)` with self-loops kept.
pub fn lambda_derivative_check(
    m: &GeneralizedGraph,
    n: usize,
    beta: f64,
    k: usize,
    step: f64,
    quad: &QuadratureSpec,
) -> Result<NumericReport> {
    let start = Instant::now();
    if k != 2 && k != 4 {
        return Err(Error::domain(format!(
            "derivative order must be 2 or 4, got {k} (odd orders vanish by parity)"
        )));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    double_quadrature_size(n)?;
    let p = leg_free_monomial(m)?;
    let h = step;
    let f = averaged_deformed_expect_many(&[&p], n, beta, &[0.0, h, 2.0 * h, 4.0 * h], quad, KernelMode::Exact)?;
    let [f0, f1, f2, f4] = [f[0][0], f[1][0], f[2][0], f[3][0]];
    // f is even in λ
    let lhs = if k == 2 {
        let d1 = second_derivative(f2, f1, f0, f1, f2, h);
        let d2 = second_derivative(f4, f2, f0, f2, f4, 2.0 * h);
        richardson(d1, d2, 4)
    } else {
        let d1 = fourth_derivative(f2, f1, f0, f1, f2, h);
        let d2 = fourth_derivative(f4, f2, f0, f2, f4, 2.0 * h);
        richardson(d1, d2, 2)
    };
    let wick = wick_delta_power(&p, k, DiagonalMode::Kernel)?.polynomial;
    let mut targets = vec![&wick];
    let delta2;
    if k == 4 {
        delta2 = big_delta(&big_delta(&p, DiagonalMode::Kernel)?, DiagonalMode::Kernel)?;
        targets.push(&delta2);
    }
    let values = quenched_expect_many(&targets, n, beta, quad, KernelMode::Exact)?;
    let mut report = NumericReport::new(
        "lambda_derivative",
        json!({"monomial": m.to_string(), "N": n, "beta": beta, "order": k, "step": h,
               "quad_nodes": quad.effective_nodes(n * (n - 1) / 2)}),
    )
    .compare(lhs, values[0], LAMBDA_TOLERANCE);
    if k == 4 {
        let three = 3.0 * values[1];
        let err = relative_error(lhs, three);
        report.details.insert("three_delta_squared".into(), three);
        report.details.insert("rel_error_three_delta_squared".into(), err);
        report.pass &= err <= LAMBDA_TOLERANCE;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Nested `J`, `J′` quadrature is only tractable for `N <= 3`.
fn double_quadrature_size(n: usize) -> Result<()> {
    if n > 3 {
        return Err(Error::Capacity {
            what: "spin count for nested quadrature",
            actual: n,
            cap: 3,
        });
    }
    Ok(())
}

fn expectations_at(p: &Polynomial, n: usize, betas: &[f64], quad: &QuadratureSpec) -> Result<Vec<f64>> {
    betas
        .iter()
        .map(|&b| quenched_expect(p, n, b, quad, KernelMode::Exact))
        .collect()
}

fn positive_beta(beta: f64, step: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain(format!("inverse temperature must be positive, got {beta}")));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    Ok(())
}

/// `(1/β)∂_β E_N(M)` against `N·E_N(ΔM)`.
pub fn beta_derivative_check(
    m: &GeneralizedGraph,
    n: usize,
    beta: f64,
    step: f64,
    quad: &QuadratureSpec,
) -> Result<NumericReport> {
    let start = Instant::now();
    positive_beta(beta, step)?;
    let p = leg_free_monomial(m)?;
    let e = expectations_at(&p, n, &[-2.0, -1.0, 1.0, 2.0].map(|i| beta + i * step), quad)?;
    let lhs = first_derivative(e[0], e[1], e[2], e[3], step) / beta;
    let delta = big_delta(&p, DiagonalMode::Kernel)?;
    let rhs = n as f64 * quenched_expect(&delta, n, beta, quad, KernelMode::Exact)?;
    let mut report = NumericReport::new(
        "beta_derivative",
        json!({"monomial": m.to_string(), "N": n, "beta": beta, "step": step}),
    )
    .compare(lhs, rhs, BETA_TOLERANCE);
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `ρ = ((1/β)∂_β)² E_N(M) / (N² E_N(Δ²M))`, compared with 1 and with 3.
pub fn beta_second_derivative_ratio(
    m: &GeneralizedGraph,
    n: usize,
    beta: f64,
    step: f64,
    quad: &QuadratureSpec,
) -> Result<NumericReport> {
    let start = Instant::now();
    positive_beta(beta, step)?;
    if beta <= 4.0 * step {
        return Err(Error::domain(format!("inverse temperature {beta} is too close to 0 for step {step}")));
    }
    let p = leg_free_monomial(m)?;
    let grid: Vec<f64> = (-4..=4).map(|i| beta + f64::from(i) * step).collect();
    let e = expectations_at(&p, n, &grid, quad)?;
    // g(b) = E'(b)/b at offsets -2,-1,1,2
    let g = |c: usize| first_derivative(e[c - 2], e[c - 1], e[c + 1], e[c + 2], step) / grid[c];
    let numerator = first_derivative(g(2), g(3), g(5), g(6), step) / beta;
    let d2 = big_delta(&big_delta(&p, DiagonalMode::Kernel)?, DiagonalMode::Kernel)?;
    let denominator = (n * n) as f64 * quenched_expect(&d2, n, beta, quad, KernelMode::Exact)?;
    let mut report = NumericReport::new(
        "beta_second_derivative_ratio",
        json!({"monomial": m.to_string(), "N": n, "beta": beta, "step": step}),
    );
    report.lhs = Some(numerator);
    report.rhs = Some(denominator);
    report.tolerance = Some(RATIO_TOLERANCE);
    if denominator.abs() < 1e-12 && numerator.abs() < 1e-6 {
        report.pass = true;
        report.notes.push("ratio undefined (0/0)".into());
    } else {
        let rho = numerator / denominator;
        report.ratio = Some(rho);
        report.rel_error = Some((rho - 1.0).abs());
        report.details.insert("distance_to_1".into(), (rho - 1.0).abs());
        report.details.insert("distance_to_3".into(), (rho - 3.0).abs());
        report.pass = (rho - 1.0).abs() <= RATIO_TOLERANCE;
        let verdict = if report.pass { "ρ = 1" } else if (rho - 3.0).abs() <= RATIO_TOLERANCE { "ρ = 3" } else { "neither" };
        report.notes.push(format!(
            "measured {verdict}; a factor 3 is not supported, iterating the first-order identity gives 1"
        ));
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `Av_J deformedExpect(M, λ)` against `E_N(M)` at `β̃ = √(β² + λ²/N)`.
pub fn effective_beta_check(
    m: &GeneralizedGraph,
    n: usize,
    beta: f64,
    lambda: f64,
    quad: &QuadratureSpec,
) -> Result<NumericReport> {
    let start = Instant::now();
    double_quadrature_size(n)?;
    let p = leg_free_monomial(m)?;
    let lhs = averaged_deformed_expect_many(&[&p], n, beta, &[lambda], quad, KernelMode::Exact)?[0][0];
    let beta_eff = (beta * beta + lambda * lambda / n as f64).sqrt();
    let rhs = quenched_expect(&p, n, beta_eff, quad, KernelMode::Exact)?;
    let mut report = NumericReport::new(
        "effective_beta",
        json!({"monomial": m.to_string(), "N": n, "beta": beta, "lambda": lambda}),
    )
    .compare(lhs, rhs, EFFECTIVE_BETA_TOLERANCE);
    report.details.insert("beta_effective".into(), beta_eff);
    report.elapsed = start.elapsed();
    Ok(report)
}

/// One size in a [`rate_trend`] table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub inv_n: f64,
    pub inv_n2: f64,
    pub delta: f64,
    pub delta2: f64,
}

/// `E_N(ΔM)` and `E_N(Δ²M)` across sizes; passes when `|E_N(ΔM)|` is
/// strictly decreasing in `N`.
pub fn rate_trend(m: &GeneralizedGraph, ns: &[usize], beta: f64, quad: &QuadratureSpec) -> Result<NumericReport> {
    let start = Instant::now();
    let p = leg_free_monomial(m)?;
    let d1 = big_delta(&p, DiagonalMode::Kernel)?;
    let d2 = big_delta(&d1, DiagonalMode::Kernel)?;
    let mut report = NumericReport::new(
        "rate_trend",
        json!({"monomial": m.to_string(), "Ns": ns, "beta": beta}),
    );
    for &n in ns {
        let v = quenched_expect_many(&[&d1, &d2], n, beta, quad, KernelMode::Exact)?;
        report.rows.push(RateRow {
            n,
            inv_n: 1.0 / n as f64,
            inv_n2: 1.0 / (n * n) as f64,
            delta: v[0],
            delta2: v[1],
        });
    }
    let shrinking = |f: fn(&RateRow) -> f64| report.rows.windows(2).all(|w| f(&w[1]).abs() < f(&w[0]).abs());
    if report.rows.len() < 2 {
        report.notes.push("trend n/a".into());
        report.pass = true;
    } else {
        report.pass = shrinking(|r| r.delta);
        let d2_shrinking = shrinking(|r| r.delta2);
        report.notes.push(format!(
            "|E(ΔM)| {} in N; |E(Δ²M)| {} in N",
            if report.pass { "strictly decreasing" } else { "not monotone" },
            if d2_shrinking { "strictly decreasing" } else { "not monotone" }
        ));
    }
    report.elapsed = start.elapsed();
    Ok(report)
}
