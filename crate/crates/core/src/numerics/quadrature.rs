//! Gaussian averages over coupling vectors.

use std::num::NonZeroUsize;

use gauss_quad::GaussHermite;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension integrated by tensor quadrature.
pub const MAX_QUADRATURE_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_dim: usize,
    /// Upper bound on tensor grid size; `nodes_per_dim` is lowered to fit.
    pub node_budget: u64,
    /// Monte Carlo sample count above [`MAX_QUADRATURE_DIM`]; 0 disables it.
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_dim: 20,
            node_budget: 2_000_000,
            mc_samples: 0,
            seed: 12345,
        }
    }
}

impl QuadratureSpec {
    pub fn with_nodes(nodes_per_dim: usize) -> Self {
        QuadratureSpec {
            nodes_per_dim,
            ..Self::default()
        }
    }

    /// Nodes per dimension actually used in dimension `dim`.
    pub fn effective_nodes(&self, dim: usize) -> usize {
        let mut n = self.nodes_per_dim;
        while n > 2 && (n as f64).powi(dim as i32) > self.node_budget as f64 {
            n -= 1;
        }
        n
    }
}

/// A weighted point set approximating the standard Gaussian on `R^dim`.
#[derive(Clone, Debug)]
pub enum GaussianRule {
    Tensor {
        dim: usize,
        nodes: Vec<f64>,
        weights: Vec<f64>,
    },
    MonteCarlo {
        dim: usize,
        points: Vec<f64>,
    },
}

impl GaussianRule {
    pub fn new(dim: usize, spec: &QuadratureSpec) -> Result<Self> {
        if spec.nodes_per_dim < 2 {
            return Err(Error::domain(format!(
                "need at least 2 quadrature nodes per dimension, got {}",
                spec.nodes_per_dim
            )));
        }
        if dim <= MAX_QUADRATURE_DIM {
            let (nodes, weights) = hermite_standard(spec.effective_nodes(dim));
            return Ok(GaussianRule::Tensor { dim, nodes, weights });
        }
        if spec.mc_samples == 0 {
            return Err(Error::Capacity {
                what: "quadrature dimension",
                actual: dim,
                cap: MAX_QUADRATURE_DIM,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let points = (0..spec.mc_samples * dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        Ok(GaussianRule::MonteCarlo { dim, points })
    }

    pub fn dim(&self) -> usize {
        match self {
            GaussianRule::Tensor { dim, .. } | GaussianRule::MonteCarlo { dim, .. } => *dim,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            GaussianRule::Tensor { dim, nodes, .. } => nodes.len().pow(*dim as u32),
            GaussianRule::MonteCarlo { dim, points } => {
                if *dim == 0 {
                    1
                } else {
                    points.len() / dim
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Calls `f(point, weight)` for every point in a fixed order.
    pub fn for_each(&self, mut f: impl FnMut(&[f64], f64)) {
        match self {
            GaussianRule::Tensor { dim, nodes, weights } => {
                let n = nodes.len();
                let mut idx = vec![0usize; *dim];
                let mut point: Vec<f64> = vec![nodes[0]; *dim];
                loop {
                    let w: f64 = idx.iter().map(|&i| weights[i]).product();
                    f(&point, w);
                    let mut k = 0;
                    loop {
                        if k == *dim {
                            return;
                        }
                        idx[k] += 1;
                        if idx[k] < n {
                            point[k] = nodes[idx[k]];
                            break;
                        }
                        idx[k] = 0;
                        point[k] = nodes[0];
                        k += 1;
                    }
                }
            }
            GaussianRule::MonteCarlo { dim, points } => {
                if *dim == 0 {
                    f(&[], 1.0);
                    return;
                }
                let w = 1.0 / self.len() as f64;
                for p in points.chunks_exact(*dim) {
                    f(p, w);
                }
            }
        }
    }

    /// `E f(Z)` with compensated accumulation.
    pub fn expect(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let mut acc = NeumaierSum::default();
        self.for_each(|p, w| acc.add(w * f(p)));
        acc.value()
    }
}

/// Gauss–Hermite rule for `N(0,1)`, symmetrized so the node set is exactly
/// closed under negation.
pub fn hermite_standard(n: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussHermite::new(NonZeroUsize::new(n).expect("n >= 2"));
    let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nodes_raw: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let weights_raw: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let j = n - 1 - i;
        let x = (nodes_raw[i] - nodes_raw[j]) / 2.0;
        let w = (weights_raw[i] + weights_raw[j]) / 2.0;
        nodes[i] = x * std::f64::consts::SQRT_2;
        weights[i] = w / std::f64::consts::PI.sqrt();
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    (nodes, weights)
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
