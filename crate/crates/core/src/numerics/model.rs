//! Finite SK instances, overlap kernels and Gibbs states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest spin count accepted for enumeration.
pub const MAX_SPINS: usize = 14;

/// A spin configuration, entries `±1`.
pub type Configuration = Vec<i8>;

/// How an overlap edge between two configurations is valued.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    /// `q²(σ,σ')`.
    Idealized,
    /// `(q² − 1/N)/2`, the covariance of the deformation field `K`.
    #[default]
    Exact,
}

impl std::str::FromStr for KernelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(KernelMode::Exact),
            "idealized" => Ok(KernelMode::Idealized),
            other => Err(Error::domain(format!(
                "unknown kernel {other:?} (expected exact or idealized)"
            ))),
        }
    }
}

/// Overlap `q = (1/N) Σ σᵢσ'ᵢ`.
pub fn overlap(a: &[i8], b: &[i8]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::domain(format!(
            "configurations of lengths {} and {} cannot be compared",
            a.len(),
            b.len()
        )));
    }
    let dot: i64 = a.iter().zip(b).map(|(&x, &y)| i64::from(x) * i64::from(y)).sum();
    Ok(dot as f64 / a.len() as f64)
}

/// Edge value between two configurations under `mode`.
pub fn overlap_kernel(a: &[i8], b: &[i8], mode: KernelMode) -> Result<f64> {
    let q = overlap(a, b)?;
    Ok(kernel_from_overlap(q, a.len(), mode))
}

pub(crate) fn kernel_from_overlap(q: f64, n: usize, mode: KernelMode) -> f64 {
    match mode {
        KernelMode::Idealized => q * q,
        KernelMode::Exact => (q * q - 1.0 / n as f64) / 2.0,
    }
}

/// Number of couplings `J_{i,j}`, `i < j`.
pub fn coupling_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// All `2^N` configurations, spin `i` taken from bit `i` (set bit = `-1`).
pub fn all_configurations(n: usize) -> Vec<Configuration> {
    (0..1u32 << n)
        .map(|bits| {
            (0..n)
                .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}

/// `σᵢσⱼ` for `i < j` in lexicographic pair order.
pub(crate) fn pair_products(sigma: &[i8]) -> Vec<f64> {
    let n = sigma.len();
    let mut out = Vec::with_capacity(coupling_count(n));
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(f64::from(sigma[i] * sigma[j]));
        }
    }
    out
}

/// A finite SK instance with fixed couplings.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinModel {
    n: usize,
    couplings: Vec<f64>,
    beta: f64,
}

/// Normalized Boltzmann weights over all `2^N` configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsState {
    pub configurations: Vec<Configuration>,
    pub weights: Vec<f64>,
    pub log_z: f64,
    /// `(1/N) log Z`, i.e. `-β f_N` for this disorder sample.
    pub free_energy_density: f64,
}

impl SpinModel {
    pub fn new(n: usize, couplings: Vec<f64>, beta: f64) -> Result<Self> {
        validate_size(n)?;
        if couplings.len() != coupling_count(n) {
            return Err(Error::domain(format!(
                "N = {n} needs {} couplings, got {}",
                coupling_count(n),
                couplings.len()
            )));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("inverse temperature must be finite and >= 0, got {beta}")));
        }
        Ok(SpinModel { n, couplings, beta })
    }

    pub fn spins(&self) -> usize {
        self.n
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `H(σ) = -(1/√N) Σ_{i<j} J_{ij} σᵢσⱼ`.
    pub fn energy(&self, sigma: &[i8]) -> f64 {
        let s: f64 = pair_products(sigma)
            .iter()
            .zip(&self.couplings)
            .map(|(p, j)| p * j)
            .sum();
        -s / (self.n as f64).sqrt()
    }

    /// Weights `∝ e^{-βH}` over all configurations.
    pub fn gibbs_state(&self) -> GibbsState {
        let configurations = all_configurations(self.n);
        let exponents: Vec<f64> = configurations
            .iter()
            .map(|s| -self.beta * self.energy(s))
            .collect();
        let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = exponents.iter().map(|e| (e - max).exp()).collect();
        let total: f64 = raw.iter().sum();
        let log_z = max + total.ln();
        GibbsState {
            weights: raw.iter().map(|w| w / total).collect(),
            free_energy_density: log_z / self.n as f64,
            log_z,
            configurations,
        }
    }
}

pub(crate) fn validate_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("need at least 2 spins, got {n}")));
    }
    if n > MAX_SPINS {
        return Err(Error::Capacity {
            what: "spin count",
            actual: n,
            cap: MAX_SPINS,
        });
    }
    Ok(())
}
