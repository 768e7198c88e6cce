//! Generalized overlap graphs.
//!
//! A [`GeneralizedGraph`] is a monomial in the replica calculus: a multiset of
//! edges `(l,m)` standing for overlap factors between replicas `l` and `m`,
//! plus a multiset of legs `(l)` standing for unpaired Gaussian insertions at
//! replica `l`. Vertices are positive integers. A third, vertex-free factor
//! `d^k` records powers of a formal diagonal constant and is only produced by
//! [`DiagonalMode::Symbol`](crate::operators::DiagonalMode::Symbol).

mod canonical;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canonical::{canonicalize, canonicalize_with_cap, CanonicalForm, DEFAULT_VERTEX_CAP};
pub use parse::parse;

/// A replica index. Always `>= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(u32);

impl VertexId {
    pub fn new(label: u32) -> Result<Self> {
        if label == 0 {
            return Err(Error::domain("vertex labels start at 1"));
        }
        Ok(VertexId(label))
    }

    pub fn label(self) -> u32 {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Edge and leg multisets over replica indices.
///
/// Edges are stored as sorted `(u, v)` pairs with `u <= v`, repeated once per
/// unit of multiplicity; legs likewise as a sorted list of vertices. The
/// derived ordering (edges, then legs, then the diagonal power) is the
/// encoding order used for canonical forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneralizedGraph {
    edges: Vec<(u32, u32)>,
    legs: Vec<u32>,
    diag: u32,
}

/// Summary returned by [`GeneralizedGraph::inspect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphShape {
    pub vertices: BTreeSet<u32>,
    pub edge_count: usize,
    pub leg_count: usize,
}

impl GeneralizedGraph {
    /// The empty product, rendered `1`.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a graph from raw edge and leg lists. Labels must be `>= 1`.
    pub fn from_parts(
        edges: impl IntoIterator<Item = (u32, u32)>,
        legs: impl IntoIterator<Item = u32>,
    ) -> Result<Self> {
        let mut edges: Vec<(u32, u32)> = edges
            .into_iter()
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        let mut legs: Vec<u32> = legs.into_iter().collect();
        if edges.iter().any(|&(u, _)| u == 0) || legs.contains(&0) {
            return Err(Error::domain("vertex labels start at 1"));
        }
        edges.sort_unstable();
        legs.sort_unstable();
        Ok(GeneralizedGraph {
            edges,
            legs,
            diag: 0,
        })
    }

    /// Builds a graph from an edge list only.
    pub fn from_edges(edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        Self::from_parts(edges, [])
    }

    pub(crate) fn from_sorted_unchecked(edges: Vec<(u32, u32)>, legs: Vec<u32>, diag: u32) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(legs.windows(2).all(|w| w[0] <= w[1]));
        GeneralizedGraph { edges, legs, diag }
    }

    /// Edges with repetition, sorted, each as `(u, v)` with `u <= v`.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Leg vertices with repetition, sorted.
    pub fn legs(&self) -> &[u32] {
        &self.legs
    }

    /// Power of the formal diagonal constant `d`.
    pub fn diag_power(&self) -> u32 {
        self.diag
    }

    /// Distinct edges with their multiplicities.
    pub fn edge_multiplicities(&self) -> Vec<((u32, u32), u32)> {
        run_lengths(&self.edges)
    }

    /// Distinct leg vertices with their multiplicities.
    pub fn leg_multiplicities(&self) -> Vec<(u32, u32)> {
        run_lengths(&self.legs)
    }

    /// All endpoints of edges together with all leg vertices.
    pub fn vertex_set(&self) -> BTreeSet<u32> {
        self.edges
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .chain(self.legs.iter().copied())
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_set().len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn self_loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    pub fn is_leg_free(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.legs.is_empty() && self.diag == 0
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.legs.binary_search(&v).is_ok() || self.edges.iter().any(|&(a, b)| a == v || b == v)
    }

    /// Vertex set, edge count and leg count (both counted with multiplicity).
    pub fn inspect(&self) -> GraphShape {
        GraphShape {
            vertices: self.vertex_set(),
            edge_count: self.edge_count(),
            leg_count: self.leg_count(),
        }
    }

    /// Smallest positive label not used by this graph.
    pub fn fresh_vertex(&self) -> u32 {
        let used = self.vertex_set();
        (1..).find(|v| !used.contains(v)).expect("unbounded range")
    }

    /// Adds one leg at `v`.
    pub fn with_leg(&self, v: VertexId) -> Self {
        let mut out = self.clone();
        let pos = out.legs.partition_point(|&x| x <= v.0);
        out.legs.insert(pos, v.0);
        out
    }

    /// Adds one edge `{u, v}`; `u == v` gives a self-loop.
    pub fn with_edge(&self, u: VertexId, v: VertexId) -> Self {
        let e = if u <= v { (u.0, v.0) } else { (v.0, u.0) };
        let mut out = self.clone();
        let pos = out.edges.partition_point(|&x| x <= e);
        out.edges.insert(pos, e);
        out
    }

    /// Multiplies by `d^k`.
    pub fn with_diag_power(&self, k: u32) -> Self {
        let mut out = self.clone();
        out.diag += k;
        out
    }

    /// Drops every leg.
    pub fn without_legs(&self) -> Self {
        GeneralizedGraph {
            edges: self.edges.clone(),
            legs: Vec::new(),
            diag: self.diag,
        }
    }

    /// Applies an injective relabeling of the vertices.
    pub fn relabel(&self, mut map: impl FnMut(u32) -> u32) -> Self {
        let mut edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (map(u), map(v));
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        let mut legs: Vec<u32> = self.legs.iter().map(|&v| map(v)).collect();
        edges.sort_unstable();
        legs.sort_unstable();
        GeneralizedGraph {
            edges,
            legs,
            diag: self.diag,
        }
    }

    /// Text form: diagonal power first, then edges, then legs, with `^k` for
    /// multiplicities above one. The empty product renders as `1`.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn run_lengths<T: Copy + PartialEq>(items: &[T]) -> Vec<(T, u32)> {
    let mut out: Vec<(T, u32)> = Vec::new();
    for &x in items {
        match out.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn write_power(f: &mut fmt::Formatter<'_>, k: u32) -> fmt::Result {
    if k > 1 {
        write!(f, "^{k}")?;
    }
    Ok(())
}

impl fmt::Display for GeneralizedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        if self.diag > 0 {
            f.write_str("d")?;
            write_power(f, self.diag)?;
        }
        for ((u, v), k) in self.edge_multiplicities() {
            write!(f, "({u},{v})")?;
            write_power(f, k)?;
        }
        for (v, k) in self.leg_multiplicities() {
            write!(f, "({v})")?;
            write_power(f, k)?;
        }
        Ok(())
    }
}

impl FromStr for GeneralizedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GeneralizedGraph {
        s.parse().unwrap()
    }

    #[test]
    fn render_examples() {
        assert_eq!(g("(1,2)^2(3)").render(), "(1,2)^2(3)");
        assert_eq!(GeneralizedGraph::empty().render(), "1");
        assert_eq!(
            GeneralizedGraph::from_edges([(2, 3), (1, 2)]).unwrap().render(),
            "(1,2)(2,3)"
        );
        assert_eq!(g("(3)(2,1)(1)^2").render(), "(1,2)(1)^2(3)");
    }

    #[test]
    fn inspect_counts_leg_only_vertices() {
        let shape = g("(1,2)^2(3)").inspect();
        assert_eq!(shape.vertices, BTreeSet::from([1, 2, 3]));
        assert_eq!((shape.edge_count, shape.leg_count), (2, 1));

        let empty = GeneralizedGraph::empty().inspect();
        assert!(empty.vertices.is_empty());
        assert_eq!((empty.edge_count, empty.leg_count), (0, 0));

        let path = g("(1,2)(2,3)").inspect();
        assert_eq!(path.vertices, BTreeSet::from([1, 2, 3]));
        assert_eq!((path.edge_count, path.leg_count), (2, 0));
    }

    #[test]
    fn with_leg_and_edge() {
        let v = |x| VertexId::new(x).unwrap();
        assert_eq!(g("(1,2)").with_leg(v(2)), g("(2)(1,2)"));
        assert_eq!(g("(1,2)").with_edge(v(3), v(4)), g("(1,2)(3,4)"));
        let looped = g("(1,2)").with_edge(v(1), v(1));
        assert_eq!(looped, g("(1,1)(1,2)"));
        assert_eq!(looped.self_loop_count(), 1);
    }

    #[test]
    fn fresh_vertex_is_smallest_unused() {
        assert_eq!(g("(1,3)").fresh_vertex(), 2);
        assert_eq!(g("(1,2)").fresh_vertex(), 3);
        assert_eq!(GeneralizedGraph::empty().fresh_vertex(), 1);
    }

    #[test]
    fn zero_label_rejected() {
        assert!(VertexId::new(0).is_err());
        assert!(GeneralizedGraph::from_edges([(0, 1)]).is_err());
    }
}
