//! Exact linear combinations of canonical graphs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonicalize, parse, CanonicalForm, GeneralizedGraph};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A finite sum `Σ c_α M_α` over canonical graphs with nonzero rational
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<CanonicalForm, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The polynomial `1·G`.
    pub fn monomial(graph: &GeneralizedGraph) -> Result<Self> {
        let mut p = Self::zero();
        p.add_graph(int(1), graph)?;
        Ok(p)
    }

    /// Parses `text` as a single graph and returns it with coefficient one.
    pub fn parse_monomial(text: &str) -> Result<Self> {
        Self::monomial(&parse(text)?)
    }

    /// Builds a polynomial from `(coefficient, graph)` pairs.
    pub fn from_terms<'a>(
        pairs: impl IntoIterator<Item = (i64, &'a GeneralizedGraph)>,
    ) -> Result<Self> {
        let mut p = Self::zero();
        for (c, g) in pairs {
            p.add_graph(int(c), g)?;
        }
        Ok(p)
    }

    /// Builds a polynomial from `(coefficient, graph text)` pairs.
    pub fn from_text_terms<'a>(pairs: impl IntoIterator<Item = (i64, &'a str)>) -> Result<Self> {
        let mut p = Self::zero();
        for (c, text) in pairs {
            p.add_graph(int(c), &parse(text)?)?;
        }
        Ok(p)
    }

    pub fn add_graph(&mut self, coeff: Rational, graph: &GeneralizedGraph) -> Result<()> {
        let key = canonicalize(graph)?;
        self.add_term(coeff, key);
        Ok(())
    }

    pub fn add_term(&mut self, coeff: Rational, key: CanonicalForm) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `coeff · other` in place.
    pub fn add_scaled(&mut self, coeff: &Rational, other: &Polynomial) {
        if coeff.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(c * coeff, k.clone());
        }
    }

    /// `Σ cᵢ·Pᵢ`, merged exactly with zero terms dropped.
    pub fn combine<'a>(pairs: impl IntoIterator<Item = (Rational, &'a Polynomial)>) -> Self {
        let mut out = Self::zero();
        for (c, p) in pairs {
            out.add_scaled(&c, p);
        }
        out
    }

    pub fn scale(&self, coeff: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(coeff, self);
        out
    }

    /// Terms in encoding order.
    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalForm, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, graph: &GeneralizedGraph) -> Result<Rational> {
        let key = canonicalize(graph)?;
        Ok(self.terms.get(&key).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_leg_free(&self) -> bool {
        self.terms.keys().all(|k| k.graph().is_leg_free())
    }

    /// Largest vertex count over the terms.
    pub fn max_vertices(&self) -> usize {
        self.terms
            .keys()
            .map(|k| k.graph().vertex_count())
            .max()
            .unwrap_or(0)
    }

    /// Sum of coefficients: the value at the degenerate point where every
    /// overlap (and the diagonal constant) equals one.
    pub fn coefficient_sum(&self) -> Result<Rational> {
        if let Some((k, _)) = self.terms.iter().find(|(k, _)| !k.graph().is_leg_free()) {
            return Err(Error::domain(format!(
                "coefficient sum needs leg-free terms, found {k}"
            )));
        }
        Ok(self.terms.values().fold(Rational::zero(), |acc, c| acc + c))
    }

    /// Applies a linear map defined on monomials.
    pub fn map_linear(
        &self,
        mut f: impl FnMut(&GeneralizedGraph) -> Result<Polynomial>,
    ) -> Result<Polynomial> {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let image = f(k.graph())?;
            out.add_scaled(c, &image);
        }
        Ok(out)
    }

    /// Compact JSON document `{"terms":[{"graph":..,"coeff":..}]}`.
    pub fn to_wire(&self) -> String {
        serde_json::to_string(&self.to_wire_doc()).expect("plain strings serialize")
    }

    pub fn to_wire_doc(&self) -> WireDoc {
        WireDoc {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| WireTerm {
                    graph: k.to_string(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_wire(text: &str) -> Result<Self> {
        let doc: WireDoc = serde_json::from_str(text).map_err(|e| Error::Wire(e.to_string()))?;
        Self::from_wire_doc(&doc)
    }

    pub fn from_wire_doc(doc: &WireDoc) -> Result<Self> {
        let mut out = Self::zero();
        for term in &doc.terms {
            let graph = parse(&term.graph)?;
            let coeff = parse_rational(&term.coeff)?;
            out.add_graph(coeff, &graph)?;
        }
        Ok(out)
    }
}

fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    let bad = || Error::Wire(format!("bad coefficient {text:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Serialized polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireDoc {
    pub terms: Vec<WireTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireTerm {
    pub graph: String,
    pub coeff: String,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = WireDoc::deserialize(deserializer)?;
        Polynomial::from_wire_doc(&doc).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            let graph = k.to_string();
            if magnitude.is_one() {
                f.write_str(&graph)?;
            } else if graph == "1" {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_integer() {
                write!(f, "{magnitude}{graph}")?;
            } else {
                write!(f, "({magnitude}){graph}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(&int(1), rhs);
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(&int(-1), rhs);
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&int(-1))
    }
}

impl Mul<&Polynomial> for &Rational {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        rhs.scale(self)
    }
}
