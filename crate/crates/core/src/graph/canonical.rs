//! Canonical labeling of generalized graphs.
//!
//! Each connected component is labeled by individualization-refinement:
//! vertex colors start from (legs, self-loops, degree) signatures, are refined
//! to a stable partition, and every vertex of the first non-singleton cell is
//! individualized in turn. The smallest leaf encoding wins. Swapping twin
//! vertices is an automorphism, so only one twin per cell is explored.
//! Components are then laid out largest first and concatenated.

use std::cmp::Reverse;

use super::GeneralizedGraph;
use crate::error::{Error, Result};

/// Maximum number of vertices accepted by [`canonicalize`].
pub const DEFAULT_VERTEX_CAP: usize = 12;

/// A graph in canonical labeling, vertices `1..=n`.
///
/// Two graphs have equal canonical forms iff one is an injective relabeling
/// of the other. The derived ordering is the encoding order: sorted edge
/// list, then sorted leg list, then diagonal power.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(GeneralizedGraph);

impl CanonicalForm {
    pub fn graph(&self) -> &GeneralizedGraph {
        &self.0
    }

    pub fn into_graph(self) -> GeneralizedGraph {
        self.0
    }

    /// The total-order key: (edge list, leg list, diagonal power).
    pub fn encoding(&self) -> (&[(u32, u32)], &[u32], u32) {
        (self.0.edges(), self.0.legs(), self.0.diag_power())
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Canonical form with the default vertex cap.
pub fn canonicalize(graph: &GeneralizedGraph) -> Result<CanonicalForm> {
    canonicalize_with_cap(graph, DEFAULT_VERTEX_CAP)
}

pub fn canonicalize_with_cap(graph: &GeneralizedGraph, cap: usize) -> Result<CanonicalForm> {
    let labels: Vec<u32> = graph.vertex_set().into_iter().collect();
    let n = labels.len();
    if n > cap {
        return Err(Error::Capacity {
            what: "vertex count",
            actual: n,
            cap,
        });
    }
    if n == 0 {
        return Ok(CanonicalForm(graph.clone()));
    }

    let index = |label: u32| labels.binary_search(&label).expect("vertex in set");
    let mut dense = Dense::new(n);
    for &(u, v) in graph.edges() {
        dense.add_edge(index(u), index(v));
    }
    for &v in graph.legs() {
        dense.legs[index(v)] += 1;
    }

    let mut parts: Vec<(Dense, Vec<usize>)> = dense
        .components()
        .into_iter()
        .map(|comp| {
            let local = dense.induced(&comp);
            let order = canonical_order(&local);
            let relabeled = local.permuted(&order);
            let members = order.iter().map(|&i| comp[i]).collect();
            (relabeled, members)
        })
        .collect();
    parts.sort_by(|a, b| {
        let key = |d: &Dense| (Reverse(d.n), Reverse(d.edge_total()));
        key(&a.0).cmp(&key(&b.0)).then_with(|| a.0.encoding_cmp(&b.0))
    });

    let mut new_label = vec![0u32; n];
    let mut next = 1u32;
    for (_, members) in &parts {
        for &m in members {
            new_label[m] = next;
            next += 1;
        }
    }
    let relabeled = graph.relabel(|old| new_label[index(old)]);
    Ok(CanonicalForm(relabeled))
}

/// Dense multigraph on `0..n` used during the search.
#[derive(Clone, Debug)]
struct Dense {
    n: usize,
    /// Row-major multiplicities; the diagonal holds self-loop counts.
    adj: Vec<u32>,
    legs: Vec<u32>,
}

impl Dense {
    fn new(n: usize) -> Self {
        Dense {
            n,
            adj: vec![0; n * n],
            legs: vec![0; n],
        }
    }

    fn at(&self, u: usize, v: usize) -> u32 {
        self.adj[u * self.n + v]
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.n + v] += 1;
        if u != v {
            self.adj[v * self.n + u] += 1;
        }
    }

    fn edge_total(&self) -> u32 {
        let mut total = 0;
        for u in 0..self.n {
            for v in u..self.n {
                total += self.at(u, v);
            }
        }
        total
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                for (v, seen_v) in seen.iter_mut().enumerate() {
                    if v != u && !*seen_v && self.at(u, v) > 0 {
                        *seen_v = true;
                        comp.push(v);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn induced(&self, members: &[usize]) -> Dense {
        let k = members.len();
        let mut out = Dense::new(k);
        for (a, &u) in members.iter().enumerate() {
            out.legs[a] = self.legs[u];
            for (b, &v) in members.iter().enumerate() {
                out.adj[a * k + b] = self.at(u, v);
            }
        }
        out
    }

    /// Graph where `order[i]` becomes vertex `i`.
    fn permuted(&self, order: &[usize]) -> Dense {
        self.induced(order)
    }

    /// Compares encodings (edge list then leg list, both sorted, labels 1-based).
    fn encoding_cmp(&self, other: &Dense) -> std::cmp::Ordering {
        self.encoding().cmp(&other.encoding())
    }

    fn encoding(&self) -> (Vec<(u32, u32)>, Vec<u32>) {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u..self.n {
                for _ in 0..self.at(u, v) {
                    edges.push((u as u32 + 1, v as u32 + 1));
                }
            }
        }
        let mut legs = Vec::new();
        for v in 0..self.n {
            for _ in 0..self.legs[v] {
                legs.push(v as u32 + 1);
            }
        }
        (edges, legs)
    }

    /// Transposing `v` and `w` is an automorphism.
    fn twins(&self, v: usize, w: usize) -> bool {
        if self.legs[v] != self.legs[w] || self.at(v, v) != self.at(w, w) {
            return false;
        }
        (0..self.n)
            .filter(|&u| u != v && u != w)
            .all(|u| self.at(v, u) == self.at(w, u))
    }
}

/// Replaces arbitrary sortable keys by their dense ranks.
fn rank<K: Ord + Clone>(keys: &[K]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    let colors = keys
        .iter()
        .map(|k| sorted.binary_search(k).expect("present") as u32)
        .collect();
    (colors, sorted.len())
}

fn refine(d: &Dense, colors: &mut Vec<u32>) {
    let mut classes = count_classes(colors);
    loop {
        let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..d.n)
            .map(|v| {
                let mut nbrs: Vec<(u32, u32)> = (0..d.n)
                    .filter(|&u| u != v && d.at(v, u) > 0)
                    .map(|u| (colors[u], d.at(v, u)))
                    .collect();
                nbrs.sort_unstable();
                (colors[v], nbrs)
            })
            .collect();
        let (next, count) = rank(&sigs);
        *colors = next;
        if count == classes {
            return;
        }
        classes = count;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Returns the vertex order (position = new label - 1) with minimal encoding.
fn canonical_order(d: &Dense) -> Vec<usize> {
    // Busier vertices take the smaller labels.
    let initial: Vec<(Reverse<u32>, Reverse<u32>, Reverse<u32>)> = (0..d.n)
        .map(|v| {
            let degree: u32 = (0..d.n).filter(|&u| u != v).map(|u| d.at(v, u)).sum();
            (Reverse(degree), Reverse(d.at(v, v)), Reverse(d.legs[v]))
        })
        .collect();
    let (mut colors, _) = rank(&initial);
    refine(d, &mut colors);

    let mut best: Option<Leaf> = None;
    search(d, colors, &mut best);
    best.expect("at least one leaf").1
}

/// Certificate of a leaf and the vertex order that produced it.
type Leaf = ((Vec<(u32, u32)>, Vec<u32>), Vec<usize>);

fn search(
    d: &Dense,
    colors: Vec<u32>,
    best: &mut Option<Leaf>,
) {
    let classes = count_classes(&colors);
    if classes == d.n {
        let mut order = vec![0usize; d.n];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        let enc = d.permuted(&order).encoding();
        if best.as_ref().is_none_or(|(b, _)| enc < *b) {
            *best = Some((enc, order));
        }
        return;
    }

    let mut sizes = vec![0usize; classes];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let target = sizes.iter().position(|&s| s > 1).expect("non-discrete") as u32;
    let cell: Vec<usize> = (0..d.n).filter(|&v| colors[v] == target).collect();

    let mut explored: Vec<usize> = Vec::new();
    for &v in &cell {
        if explored.iter().any(|&w| d.twins(v, w)) {
            continue;
        }
        explored.push(v);
        let keys: Vec<(u32, u32)> = (0..d.n)
            .map(|u| (colors[u], u32::from(u != v)))
            .collect();
        let (mut next, _) = rank(&keys);
        refine(d, &mut next);
        search(d, next, best);
    }
}
