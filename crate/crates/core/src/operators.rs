//! The replica calculus: `δ`, Wick contraction `C`, `Δ = Cδ²` and the
//! fourth-order check `Cδ⁴ = 3Δ²`.
//!
//! `δ` is the graphical image of `∂/∂λ` applied to a product of deformed
//! Gibbs states. On a monomial `G` it sums, over every vertex `v` of `G`
//! (leg-only vertices and vertices created by earlier steps included),
//! `δ_v⁺ G = (v)G` and `δ_v⁻ G = -(v')G` with `v'` the smallest label not
//! used by `G`. `C` replaces the legs of a term by the sum over all perfect
//! matchings of its leg slots, each matched pair becoming an edge.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{int, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::graph::{canonicalize, CanonicalForm, GeneralizedGraph, VertexId};

/// Largest leg count [`wick`] will contract in one term.
pub const MAX_CONTRACTED_LEGS: usize = 12;

/// How contracted self-pairs `(v)(v)` and stored self-loops are valued.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalMode {
    /// `Q_{l,l} = 1`: self-loops disappear, and so does a vertex left empty.
    #[default]
    Unit,
    /// Self-loops become powers of a formal constant `d` carried by the term.
    Symbol,
    /// Self-loops stay attached to their vertex; numerics value them later.
    Kernel,
}

impl std::str::FromStr for DiagonalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(DiagonalMode::Unit),
            "symbol" => Ok(DiagonalMode::Symbol),
            "kernel" => Ok(DiagonalMode::Kernel),
            other => Err(Error::domain(format!(
                "unknown diagonal mode {other:?} (expected unit, symbol or kernel)"
            ))),
        }
    }
}

fn require_vertex(g: &GeneralizedGraph, v: VertexId) -> Result<()> {
    if g.contains_vertex(v.label()) {
        Ok(())
    } else {
        Err(Error::domain(format!("vertex {v} is not in {g}")))
    }
}

/// `δ_v⁺ G = (v)G`.
pub fn delta_plus(g: &GeneralizedGraph, v: VertexId) -> Result<Polynomial> {
    require_vertex(g, v)?;
    Polynomial::monomial(&g.with_leg(v))
}

/// `δ_v⁻ G = -(v')G`, `v'` the smallest label not in `G`.
pub fn delta_minus(g: &GeneralizedGraph, v: VertexId) -> Result<Polynomial> {
    require_vertex(g, v)?;
    let fresh = VertexId::new(g.fresh_vertex())?;
    let mut p = Polynomial::zero();
    p.add_graph(int(-1), &g.with_leg(fresh))?;
    Ok(p)
}

/// Unmerged image of one monomial under `δ`, as `(coefficient, graph)` pairs
/// in which the fresh-leg addends are already collected.
fn delta_addends(g: &GeneralizedGraph) -> Result<Vec<(i64, GeneralizedGraph)>> {
    let vertices = g.vertex_set();
    let mut out = Vec::with_capacity(vertices.len() + 1);
    for &v in &vertices {
        out.push((1, g.with_leg(VertexId::new(v)?)));
    }
    if !vertices.is_empty() {
        let fresh = VertexId::new(g.fresh_vertex())?;
        out.push((-(vertices.len() as i64), g.with_leg(fresh)));
    }
    Ok(out)
}

/// `δ` on a single monomial.
pub fn delta_graph(g: &GeneralizedGraph) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for (c, term) in delta_addends(g)? {
        out.add_graph(int(c), &term)?;
    }
    Ok(out)
}

/// Linear extension of `δ`. Every output term carries one more leg.
pub fn delta(p: &Polynomial) -> Result<Polynomial> {
    p.map_linear(delta_graph)
}

/// Perfect matchings of leg slots, grouped by the resulting multiset of
/// pairs. Each pair is `(u, v)` with `u <= v`.
fn matchings(slots: &[u32]) -> HashMap<Vec<(u32, u32)>, u64> {
    fn go(
        rest: &mut Vec<u32>,
        acc: &mut Vec<(u32, u32)>,
        out: &mut HashMap<Vec<(u32, u32)>, u64>,
    ) {
        if rest.is_empty() {
            let mut key = acc.clone();
            key.sort_unstable();
            *out.entry(key).or_insert(0) += 1;
            return;
        }
        let first = rest.remove(0);
        for i in 0..rest.len() {
            let partner = rest.remove(i);
            acc.push((first.min(partner), first.max(partner)));
            go(rest, acc, out);
            acc.pop();
            rest.insert(i, partner);
        }
        rest.insert(0, first);
    }
    let mut out = HashMap::new();
    go(&mut slots.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Rewrites self-loops of a contracted term according to `mode`.
fn apply_diagonal(edges: Vec<(u32, u32)>, diag: u32, mode: DiagonalMode) -> GeneralizedGraph {
    let (loops, mut rest): (Vec<_>, Vec<_>) = edges.into_iter().partition(|(u, v)| u == v);
    match mode {
        DiagonalMode::Unit => {
            rest.sort_unstable();
            GeneralizedGraph::from_sorted_unchecked(rest, Vec::new(), diag)
        }
        DiagonalMode::Symbol => {
            rest.sort_unstable();
            GeneralizedGraph::from_sorted_unchecked(rest, Vec::new(), diag + loops.len() as u32)
        }
        DiagonalMode::Kernel => {
            rest.extend(loops);
            rest.sort_unstable();
            GeneralizedGraph::from_sorted_unchecked(rest, Vec::new(), diag)
        }
    }
}

/// Contraction of one monomial, as unmerged `(count, graph)` pairs.
fn wick_addends(g: &GeneralizedGraph, mode: DiagonalMode) -> Result<Vec<(u64, GeneralizedGraph)>> {
    let legs = g.legs();
    if legs.len() % 2 == 1 {
        return Err(Error::Parity {
            term: g.to_string(),
            legs: legs.len(),
        });
    }
    if legs.len() > MAX_CONTRACTED_LEGS {
        return Err(Error::Capacity {
            what: "legs in one contracted term",
            actual: legs.len(),
            cap: MAX_CONTRACTED_LEGS,
        });
    }
    let mut out = Vec::new();
    for (pairs, count) in matchings(legs) {
        let mut edges = g.edges().to_vec();
        edges.extend(pairs);
        out.push((count, apply_diagonal(edges, g.diag_power(), mode)));
    }
    Ok(out)
}

/// Wick contraction of one monomial.
pub fn wick_graph(g: &GeneralizedGraph, mode: DiagonalMode) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for (count, term) in wick_addends(g, mode)? {
        out.add_graph(int(count as i64), &term)?;
    }
    Ok(out)
}

/// Linear extension of the Wick contraction `C`. Output is leg-free.
pub fn wick(p: &Polynomial, mode: DiagonalMode) -> Result<Polynomial> {
    p.map_linear(|g| wick_graph(g, mode))
}

fn require_leg_free(p: &Polynomial, what: &str) -> Result<()> {
    match p.terms().find(|(k, _)| !k.graph().is_leg_free()) {
        Some((k, _)) => Err(Error::domain(format!("{what} needs leg-free input, found {k}"))),
        None => Ok(()),
    }
}

/// `Δ = Cδ²`.
pub fn big_delta(p: &Polynomial, mode: DiagonalMode) -> Result<Polynomial> {
    require_leg_free(p, "Δ")?;
    wick(&delta(&delta(p)?)?, mode)
}

/// `Δ` applied `times` times.
pub fn big_delta_power(p: &Polynomial, times: usize, mode: DiagonalMode) -> Result<Polynomial> {
    let mut out = p.clone();
    for _ in 0..times {
        out = big_delta(&out, mode)?;
    }
    Ok(out)
}

/// `½ΔM` from the general-`r` expansion
///
/// ```text
/// ½ΔM = Σ_{l<m≤r} (l,m)M − r Σ_{l≤r} (l,r+1)M + r(r+1)/2 (r+1,r+2)M
/// ```
///
/// built directly by substitution, independent of [`delta`] and [`wick`].
/// Self-loops of `M` are dropped first (unit diagonal).
pub fn closed_form_delta(m: &GeneralizedGraph) -> Result<Polynomial> {
    if !m.is_leg_free() {
        return Err(Error::domain(format!("closed-form Δ needs a leg-free monomial, got {m}")));
    }
    let stripped = apply_diagonal(m.edges().to_vec(), m.diag_power(), DiagonalMode::Unit);
    let base = canonicalize(&stripped)?.into_graph();
    let r = base.vertex_count() as u32;
    let mut out = Polynomial::zero();
    if r == 0 {
        return Ok(out);
    }
    let v = |x: u32| VertexId::new(x).expect("positive");
    for l in 1..=r {
        for m in (l + 1)..=r {
            out.add_graph(int(1), &base.with_edge(v(l), v(m)))?;
        }
    }
    for l in 1..=r {
        out.add_graph(int(-(r as i64)), &base.with_edge(v(l), v(r + 1)))?;
    }
    let pairs = (r * (r + 1) / 2) as i64;
    out.add_graph(int(pairs), &base.with_edge(v(r + 1), v(r + 2)))?;
    Ok(out)
}

/// Addend bookkeeping for an operator power.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddendCount {
    /// Sign patterns times pairings, counted per input monomial before any
    /// vertex sum: `2^k (k-1)!!` for `Cδ^k`, `(2·1)^j` for `Δ^j`.
    pub a_priori: u64,
    /// Every signed addend produced before any merging.
    pub raw: u128,
    /// Distinct canonical terms in the result.
    pub merged: usize,
}

/// Result of [`wick_delta_power`].
#[derive(Clone, Debug)]
pub struct PowerExpansion {
    pub polynomial: Polynomial,
    pub addends: AddendCount,
}

fn double_factorial(n: u64) -> u64 {
    (1..=n).rev().step_by(2).product()
}

/// `Cδ^k` for even `k >= 2`, merging canonically after every elementary step.
pub fn wick_delta_power(p: &Polynomial, k: usize, mode: DiagonalMode) -> Result<PowerExpansion> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::domain(format!(
            "Cδ^k needs an even k >= 2, got {k}; odd orders vanish by parity"
        )));
    }
    require_leg_free(p, "Cδ^k")?;

    // Signed polynomial alongside raw addend multiplicities.
    let mut current: BTreeMap<CanonicalForm, (Rational, u128)> = p
        .terms()
        .map(|(key, c)| (key.clone(), (c.clone(), 1u128)))
        .collect();
    for _ in 0..k {
        let mut next: BTreeMap<CanonicalForm, (Rational, u128)> = BTreeMap::new();
        for (key, (coeff, raw)) in &current {
            let graph = key.graph();
            let vertex_count = graph.vertex_count() as u128;
            for (c, term) in delta_addends(graph)? {
                let weight = if c < 0 { vertex_count } else { 1 };
                let entry = next
                    .entry(canonicalize(&term)?)
                    .or_insert_with(|| (Rational::zero(), 0));
                entry.0 += coeff * int(c);
                entry.1 += raw * weight;
            }
        }
        next.retain(|_, (c, raw)| !c.is_zero() || *raw > 0);
        current = next;
    }

    let mut polynomial = Polynomial::zero();
    let mut raw_total = 0u128;
    for (key, (coeff, raw)) in &current {
        for (count, term) in wick_addends(key.graph(), mode)? {
            raw_total += raw * count as u128;
            if !coeff.is_zero() {
                polynomial.add_graph(coeff * int(count as i64), &term)?;
            }
        }
    }
    let merged = polynomial.len();
    Ok(PowerExpansion {
        polynomial,
        addends: AddendCount {
            a_priori: (1u64 << k) * double_factorial(k as u64 - 1),
            raw: raw_total,
            merged,
        },
    })
}

/// Outcome of [`fourth_order_check`].
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub monomial: String,
    pub mode: DiagonalMode,
    /// `Cδ⁴M`.
    pub lhs: Polynomial,
    /// `3Δ²M`.
    pub rhs: Polynomial,
    pub residual: Polynomial,
    pub pass: bool,
    pub lhs_addends: AddendCount,
    pub rhs_addends: AddendCount,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Checks `Cδ⁴M = 3Δ²M` exactly with the unit diagonal.
pub fn fourth_order_check(m: &GeneralizedGraph) -> Result<TheoremReport> {
    fourth_order_check_with_mode(m, DiagonalMode::Unit)
}

/// [`fourth_order_check`] under another diagonal convention.
pub fn fourth_order_check_with_mode(m: &GeneralizedGraph, mode: DiagonalMode) -> Result<TheoremReport> {
    let start = Instant::now();
    if !m.is_leg_free() {
        return Err(Error::domain(format!("theorem check needs a leg-free monomial, got {m}")));
    }
    let input = Polynomial::monomial(m)?;
    let lhs = wick_delta_power(&input, 4, mode)?;
    let once = big_delta(&input, mode)?;
    let rhs = big_delta(&once, mode)?.scale(&int(3));
    let residual = &lhs.polynomial - &rhs;
    let rhs_addends = AddendCount {
        a_priori: 16,
        raw: 0,
        merged: rhs.len(),
    };
    Ok(TheoremReport {
        monomial: canonicalize(m)?.to_string(),
        mode,
        pass: residual.is_zero(),
        lhs: lhs.polynomial,
        rhs,
        residual,
        lhs_addends: lhs.addends,
        rhs_addends,
        elapsed: start.elapsed(),
    })
}

/// Outcome of [`higher_order_explore`].
#[derive(Clone, Debug, Serialize)]
pub struct ExploreReport {
    pub monomial: String,
    pub order: usize,
    /// `(2k-1)!!`.
    pub multiplier: u64,
    pub residual: Polynomial,
    pub residual_is_zero: bool,
    /// Whether a pass/fail verdict is asserted (only for `k <= 2`).
    pub asserted: bool,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
}

/// Compares `Cδ^{2k}M` with `(2k-1)!! Δ^k M`. For `k >= 3` the residual is
/// reported without a verdict.
pub fn higher_order_explore(m: &GeneralizedGraph, k: usize) -> Result<ExploreReport> {
    if k == 0 {
        return Err(Error::domain("exploration order must be at least 1"));
    }
    if 2 * k > MAX_CONTRACTED_LEGS {
        return Err(Error::Capacity {
            what: "legs in one contracted term",
            actual: 2 * k,
            cap: MAX_CONTRACTED_LEGS,
        });
    }
    let input = Polynomial::monomial(m)?;
    let multiplier = double_factorial(2 * k as u64 - 1);
    let lhs = wick_delta_power(&input, 2 * k, DiagonalMode::Unit)?.polynomial;
    let rhs = big_delta_power(&input, k, DiagonalMode::Unit)?.scale(&int(multiplier as i64));
    let residual = &lhs - &rhs;
    Ok(ExploreReport {
        monomial: canonicalize(m)?.to_string(),
        order: k,
        multiplier,
        residual_is_zero: residual.is_zero(),
        residual,
        asserted: k <= 2,
        lhs_terms: lhs.len(),
        rhs_terms: rhs.len(),
    })
}
