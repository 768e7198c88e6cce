//! Exact calculus of replica overlap graphs and a small-system SK oracle.
//!
//! Graphs ([`GeneralizedGraph`]) carry overlap edges and Gaussian legs.
//! [`Polynomial`] holds exact rational combinations of canonical graphs.
//! [`operators`] implements `δ`, Wick contraction and `Δ`; [`identities`]
//! enumerates monomial catalogs; [`numerics`] evaluates the same
//! polynomials for finite SK systems.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod graph;
pub mod identities;
pub mod numerics;
pub mod operators;
pub mod reference_tables;

pub use algebra::{Polynomial, Rational};
pub use error::{Error, Result};
pub use graph::{canonicalize, parse, CanonicalForm, GeneralizedGraph, VertexId};
