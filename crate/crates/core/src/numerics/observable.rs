//! Replica expectations of overlap polynomials for a fixed single-replica
//! state, by variable elimination over the replica index.
//!
//! Every observable here depends on configurations only through `q²`, and
//! `H`, `K` are even under a global flip, so states are indexed by flip
//! classes (first spin `+1`) with no loss.

use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::numerics::model::{kernel_from_overlap, pair_products, validate_size, KernelMode};

use num_traits::ToPrimitive;

/// Flip-class representatives of `{±1}^N`.
#[derive(Clone, Debug)]
pub(crate) struct StateSpace {
    pub n: usize,
    pub states: Vec<Vec<i8>>,
    /// `σᵢσⱼ` per state, row-major, pairs in lexicographic order.
    pub pairs: Vec<f64>,
    pub pair_count: usize,
}

impl StateSpace {
    pub fn new(n: usize) -> Result<Self> {
        validate_size(n)?;
        let states: Vec<Vec<i8>> = (0..1u32 << (n - 1))
            .map(|bits| {
                std::iter::once(1)
                    .chain((0..n - 1).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }))
                    .collect()
            })
            .collect();
        let pair_count = n * (n - 1) / 2;
        let pairs = states.iter().flat_map(|s| pair_products(s)).collect();
        Ok(StateSpace {
            n,
            states,
            pairs,
            pair_count,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// `Σ_{i<j} J_{ij} σᵢσⱼ` for every state.
    pub fn pair_sums(&self, couplings: &[f64], out: &mut [f64]) {
        for (s, o) in out.iter_mut().enumerate() {
            let row = &self.pairs[s * self.pair_count..(s + 1) * self.pair_count];
            *o = row.iter().zip(couplings).map(|(a, b)| a * b).sum();
        }
    }
}

/// Turns exponents into normalized weights in place.
pub(crate) fn softmax_in_place(x: &mut [f64]) {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for v in x.iter_mut() {
        *v = (*v - max).exp();
        total += *v;
    }
    for v in x.iter_mut() {
        *v /= total;
    }
}

#[derive(Clone, Debug)]
struct Step {
    /// Input slots with their strides over the step scope `[v, U...]`.
    inputs: Vec<(usize, Vec<usize>)>,
    scope_len: usize,
    out: usize,
}

#[derive(Clone, Debug)]
struct ComponentProgram {
    /// Matrix slot when the component is two replicas joined by one edge.
    pair: Option<usize>,
    /// Slot of each replica's unary factor.
    unary: Vec<usize>,
    steps: Vec<Step>,
    /// Slots left as scalars at the end.
    results: Vec<usize>,
}

#[derive(Clone, Debug)]
struct TermProgram {
    /// Coefficient times the constant diagonal contributions.
    scale: f64,
    components: Vec<ComponentProgram>,
}

/// A leg-free polynomial compiled for fast repeated evaluation against
/// single-replica weights.
#[derive(Clone, Debug)]
pub(crate) struct CompiledPolynomial {
    states: usize,
    terms: Vec<TermProgram>,
    slots: Vec<Vec<f64>>,
}

impl CompiledPolynomial {
    pub fn new(p: &Polynomial, space: &StateSpace, mode: KernelMode) -> Result<Self> {
        if !p.is_leg_free() {
            return Err(Error::domain(format!("cannot evaluate a polynomial with legs: {p}")));
        }
        let s = space.len();
        let n = space.n;
        let base: Vec<f64> = (0..s * s)
            .map(|k| {
                let (a, b) = (&space.states[k % s], &space.states[k / s]);
                let dot: i32 = a.iter().zip(b).map(|(x, y)| i32::from(x * y)).sum();
                kernel_from_overlap(f64::from(dot) / n as f64, n, mode)
            })
            .collect();
        let diag = kernel_from_overlap(1.0, n, mode);
        let mut slots: Vec<Vec<f64>> = Vec::new();
        let mut terms = Vec::new();
        for (graph, coeff) in p.terms() {
            let g = graph.graph();
            let coeff = coeff
                .to_f64()
                .ok_or_else(|| Error::domain(format!("coefficient {coeff} is not representable")))?;
            let loops = g.self_loop_count() as i32 + g.diag_power() as i32;
            let scale = coeff * diag.powi(loops);
            let verts: Vec<u32> = g.vertex_set().into_iter().collect();
            let local = |v: u32| verts.binary_search(&v).expect("vertex present");
            let mut edges: Vec<(usize, usize, u32)> = g
                .edge_multiplicities()
                .into_iter()
                .filter(|((a, b), _)| a != b)
                .map(|((a, b), m)| (local(a), local(b), m))
                .collect();
            edges.sort_unstable();
            let components = components_of(verts.len(), &edges)
                .into_iter()
                .filter(|c| c.len() > 1)
                .map(|c| compile_component(&c, &edges, s, &base, &mut slots))
                .collect();
            terms.push(TermProgram { scale, components });
        }
        Ok(CompiledPolynomial { states: s, terms, slots })
    }

    /// `Σ_t c_t ⟨edge product of t⟩` under the product of `w` over replicas.
    pub fn evaluate(&mut self, w: &[f64]) -> f64 {
        debug_assert_eq!(w.len(), self.states);
        let mut total = 0.0;
        for term in &self.terms {
            let mut value = term.scale;
            for comp in &term.components {
                if let Some(a) = comp.pair {
                    value *= quadratic_form(&self.slots[a], w);
                    continue;
                }
                for &u in &comp.unary {
                    self.slots[u].copy_from_slice(w);
                }
                for step in &comp.steps {
                    run_step(step, self.states, &mut self.slots);
                }
                for &r in &comp.results {
                    value *= self.slots[r][0];
                }
            }
            total += value;
        }
        total
    }
}

fn components_of(n: usize, edges: &[(usize, usize, u32)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b, _) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(v);
    }
    groups
}

fn compile_component(
    vertices: &[usize],
    edges: &[(usize, usize, u32)],
    s: usize,
    base: &[f64],
    slots: &mut Vec<Vec<f64>>,
) -> ComponentProgram {
    if vertices.len() == 2 {
        let &(_, _, m) = edges.iter().find(|e| e.0 == vertices[0]).expect("connected");
        slots.push(base.iter().map(|x| x.powi(m as i32)).collect());
        return ComponentProgram {
            pair: Some(slots.len() - 1),
            unary: Vec::new(),
            steps: Vec::new(),
            results: Vec::new(),
        };
    }
    // (variables, slot)
    let mut live: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut unary = Vec::new();
    for &v in vertices {
        slots.push(vec![0.0; s]);
        unary.push(slots.len() - 1);
        live.push((vec![v], slots.len() - 1));
    }
    for &(a, b, m) in edges.iter().filter(|e| vertices.contains(&e.0)) {
        slots.push(base.iter().map(|x| x.powi(m as i32)).collect());
        live.push((vec![a, b], slots.len() - 1));
    }
    let mut remaining: Vec<usize> = vertices.to_vec();
    let mut steps = Vec::new();
    while !remaining.is_empty() {
        // min-degree: smallest resulting scope
        let scope_of = |v: usize, live: &[(Vec<usize>, usize)]| {
            let mut u: Vec<usize> = live
                .iter()
                .filter(|(vars, _)| vars.contains(&v))
                .flat_map(|(vars, _)| vars.iter().copied())
                .filter(|&x| x != v)
                .collect();
            u.sort_unstable();
            u.dedup();
            u
        };
        let (pos, v) = remaining
            .iter()
            .copied()
            .enumerate()
            .min_by_key(|&(_, v)| (scope_of(v, &live).len(), v))
            .expect("nonempty");
        remaining.remove(pos);
        let rest = scope_of(v, &live);
        let scope: Vec<usize> = std::iter::once(v).chain(rest.iter().copied()).collect();
        let (used, kept): (Vec<_>, Vec<_>) = live.into_iter().partition(|(vars, _)| vars.contains(&v));
        live = kept;
        let inputs = used
            .into_iter()
            .map(|(vars, slot)| {
                let strides = scope
                    .iter()
                    .map(|x| match vars.iter().position(|y| y == x) {
                        Some(j) => s.pow(j as u32),
                        None => 0,
                    })
                    .collect();
                (slot, strides)
            })
            .collect();
        slots.push(vec![0.0; s.pow(rest.len() as u32)]);
        let out = slots.len() - 1;
        steps.push(Step {
            inputs,
            scope_len: scope.len(),
            out,
        });
        live.push((rest, out));
    }
    ComponentProgram {
        pair: None,
        unary,
        steps,
        results: live.into_iter().map(|(_, slot)| slot).collect(),
    }
}

const MAX_SCOPE: usize = 16;
const MAX_INPUTS: usize = 32;

fn run_step(step: &Step, s: usize, slots: &mut [Vec<f64>]) {
    let k = step.scope_len;
    let m = step.inputs.len();
    assert!(k <= MAX_SCOPE && m <= MAX_INPUTS, "elimination step too wide");
    let mut counters = [0usize; MAX_SCOPE];
    let mut idx = [0usize; MAX_INPUTS];
    let mut out = std::mem::take(&mut slots[step.out]);
    out.iter_mut().for_each(|x| *x = 0.0);
    let mut flat = 0usize;
    loop {
        let mut prod = 1.0;
        for (j, (slot, _)) in step.inputs.iter().enumerate() {
            prod *= slots[*slot][idx[j]];
        }
        out[flat / s] += prod;
        flat += 1;
        let mut p = 0;
        loop {
            if p == k {
                slots[step.out] = out;
                return;
            }
            counters[p] += 1;
            if counters[p] < s {
                for (j, (_, strides)) in step.inputs.iter().enumerate() {
                    idx[j] += strides[p];
                }
                break;
            }
            counters[p] = 0;
            for (j, (_, strides)) in step.inputs.iter().enumerate() {
                idx[j] -= strides[p] * (s - 1);
            }
            p += 1;
        }
    }
}

/// `wᵀ A w` for a symmetric `s × s` matrix.
fn quadratic_form(a: &[f64], w: &[f64]) -> f64 {
    let s = w.len();
    let mut total = 0.0;
    for (i, wi) in w.iter().enumerate() {
        let row = &a[i * s..(i + 1) * s];
        let inner: f64 = row.iter().zip(w).map(|(x, y)| x * y).sum();
        total += wi * inner;
    }
    total
}
