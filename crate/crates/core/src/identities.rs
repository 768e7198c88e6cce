//! Overlap monomial catalogs, the zero-mean families `ΔM` and `Δ²M`, and
//! catalog-wide runs of the fourth-order check.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::graph::{canonicalize, CanonicalForm, GeneralizedGraph, VertexId, DEFAULT_VERTEX_CAP};
use crate::operators::{big_delta, fourth_order_check, AddendCount, DiagonalMode};

/// Largest edge bound accepted by [`enumerate_monomials`].
pub const MAX_CATALOG_EDGES: usize = 6;

/// Every leg-free, loop-free multigraph without isolated vertices within
/// the bounds, one canonical representative per isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub max_edges: usize,
    pub max_vertices: usize,
    /// Ordered by (edge count, encoding).
    pub entries: Vec<CanonicalForm>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A catalog holding exactly the given monomials.
    pub fn from_monomials<'a>(graphs: impl IntoIterator<Item = &'a GeneralizedGraph>) -> Result<Self> {
        let mut set = BTreeSet::new();
        let mut max_edges = 0;
        let mut max_vertices = 0;
        for g in graphs {
            if !g.is_leg_free() {
                return Err(Error::domain(format!("catalog entries must be leg-free, got {g}")));
            }
            max_edges = max_edges.max(g.edge_count());
            max_vertices = max_vertices.max(g.vertex_count());
            set.insert((g.edge_count(), canonicalize(g)?));
        }
        Ok(Catalog {
            max_edges,
            max_vertices,
            entries: set.into_iter().map(|(_, k)| k).collect(),
        })
    }
}

/// Grows the catalog one edge at a time: every class with `e + 1` edges is
/// some class with `e` edges plus one edge between existing vertices, from
/// an existing vertex to a new one, or between two new vertices.
pub fn enumerate_monomials(max_edges: usize, max_vertices: usize) -> Result<Catalog> {
    if max_edges > MAX_CATALOG_EDGES {
        return Err(Error::Capacity {
            what: "catalog edge bound",
            actual: max_edges,
            cap: MAX_CATALOG_EDGES,
        });
    }
    if max_vertices > DEFAULT_VERTEX_CAP {
        return Err(Error::Capacity {
            what: "catalog vertex bound",
            actual: max_vertices,
            cap: DEFAULT_VERTEX_CAP,
        });
    }
    let v = |x: u32| VertexId::new(x).expect("positive");
    let mut entries = Vec::new();
    let mut layer: BTreeSet<CanonicalForm> = BTreeSet::new();
    if max_edges >= 1 && max_vertices >= 2 {
        layer.insert(canonicalize(&GeneralizedGraph::from_edges([(1, 2)])?)?);
    }
    for _ in 1..=max_edges {
        if layer.is_empty() {
            break;
        }
        entries.extend(layer.iter().cloned());
        let mut next = BTreeSet::new();
        for key in &layer {
            let g = key.graph();
            let n = g.vertex_count() as u32;
            let mut grown = Vec::new();
            for a in 1..=n {
                for b in (a + 1)..=n {
                    grown.push(g.with_edge(v(a), v(b)));
                }
                grown.push(g.with_edge(v(a), v(n + 1)));
            }
            grown.push(g.with_edge(v(n + 1), v(n + 2)));
            for h in grown {
                if h.vertex_count() <= max_vertices {
                    next.insert(canonicalize(&h)?);
                }
            }
        }
        layer = next;
    }
    Ok(Catalog {
        max_edges,
        max_vertices,
        entries,
    })
}

/// `ΔM` and `Δ²M` for one monomial, with the exact zero-sum checks.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityRecord {
    pub monomial: String,
    pub delta: Polynomial,
    pub delta2: Polynomial,
    pub zero_sum_ok: bool,
    #[serde(skip)]
    pub notes: Vec<String>,
}

pub fn identity_record(m: &GeneralizedGraph) -> Result<IdentityRecord> {
    let input = Polynomial::monomial(m)?;
    let delta = big_delta(&input, DiagonalMode::Unit)?;
    let delta2 = big_delta(&delta, DiagonalMode::Unit)?;
    let first = delta.coefficient_sum()?;
    let second = delta2.coefficient_sum()?;
    let mut notes = Vec::new();
    if !first.is_zero() {
        notes.push(format!("coefficient sum of ΔM is {first}"));
    }
    if !second.is_zero() {
        notes.push(format!("coefficient sum of Δ²M is {second}"));
    }
    Ok(IdentityRecord {
        monomial: canonicalize(m)?.to_string(),
        zero_sum_ok: notes.is_empty(),
        delta,
        delta2,
        notes,
    })
}

pub fn generate_identities(catalog: &Catalog) -> Result<Vec<IdentityRecord>> {
    catalog
        .entries
        .iter()
        .map(|k| identity_record(k.graph()))
        .collect()
}

/// One catalog entry of a [`CatalogReport`].
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub monomial: String,
    pub pass: bool,
    pub residual: Option<Polynomial>,
    pub lhs_addends: Option<AddendCount>,
    pub rhs_addends: Option<AddendCount>,
    pub error: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub checked: usize,
    pub passed: usize,
    pub pass: bool,
    pub entries: Vec<CatalogEntry>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Runs the fourth-order check on every entry. Engine errors are recorded
/// as failed entries.
pub fn verify_catalog(catalog: &Catalog) -> CatalogReport {
    let start = Instant::now();
    let entries: Vec<CatalogEntry> = catalog
        .entries
        .iter()
        .map(|k| match fourth_order_check(k.graph()) {
            Ok(r) => CatalogEntry {
                monomial: r.monomial,
                pass: r.pass,
                residual: Some(r.residual),
                lhs_addends: Some(r.lhs_addends),
                rhs_addends: Some(r.rhs_addends),
                error: None,
                elapsed: r.elapsed,
            },
            Err(e) => CatalogEntry {
                monomial: k.to_string(),
                pass: false,
                residual: None,
                lhs_addends: None,
                rhs_addends: None,
                error: Some(e.to_string()),
                elapsed: Duration::ZERO,
            },
        })
        .collect();
    let passed = entries.iter().filter(|e| e.pass).count();
    CatalogReport {
        checked: entries.len(),
        passed,
        pass: passed == entries.len(),
        entries,
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse;

    fn names(c: &Catalog) -> Vec<String> {
        c.entries.iter().map(|k| k.to_string()).collect()
    }

    #[test]
    fn small_catalogs() {
        assert_eq!(names(&enumerate_monomials(1, 12).unwrap()), ["(1,2)"]);
        let two = enumerate_monomials(2, 12).unwrap();
        assert_eq!(two.len(), 4);
        assert_eq!(
            names(&two)[1..],
            ["(1,2)^2", "(1,2)(1,3)", "(1,2)(3,4)"]
        );
        assert_eq!(enumerate_monomials(3, 12).unwrap().len(), 12);
        assert!(enumerate_monomials(0, 12).unwrap().is_empty());
    }

    #[test]
    fn vertex_bound_prunes() {
        let c = enumerate_monomials(2, 3).unwrap();
        assert_eq!(names(&c), ["(1,2)", "(1,2)^2", "(1,2)(1,3)"]);
    }

    #[test]
    fn caps() {
        assert!(enumerate_monomials(7, 12).is_err());
        assert!(enumerate_monomials(2, 13).is_err());
    }

    #[test]
    fn records_for_edge() {
        let r = identity_record(&parse("(1,2)").unwrap()).unwrap();
        let expected = Polynomial::from_text_terms([(2, "(1,2)^2"), (-8, "(1,2)(2,3)"), (6, "(1,2)(3,4)")]).unwrap();
        assert_eq!(r.delta, expected);
        assert!(r.zero_sum_ok);
    }

    #[test]
    fn empty_catalog_passes_vacuously() {
        let report = verify_catalog(&enumerate_monomials(0, 12).unwrap());
        assert!(report.pass);
        assert_eq!(report.checked, 0);
    }

    #[test]
    fn capacity_errors_are_reported() {
        let big = GeneralizedGraph::from_edges((1..=6).map(|i| (2 * i - 1, 2 * i))).unwrap();
        let catalog = Catalog::from_monomials([&big]).unwrap();
        let report = verify_catalog(&catalog);
        assert!(!report.pass);
        assert!(report.entries[0].error.as_deref().unwrap().contains("capacity"));
    }
}
