use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::monomial::{Monomial, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// A finitely presented graded-commutative F2 algebra: generators with
/// positive degrees and homogeneous relations.
///
/// Polynomials are written as `+`-separated monomials, each monomial a
/// `*`-separated list of `name^exp` factors (`^exp` optional), or `1`; the
/// zero polynomial is `0`. Whitespace is ignored, and a repeated term cancels
/// since coefficients live in F2:
///
/// ```text
/// poly     := "0" | term ("+" term)*
/// term     := "1" | factor ("*" factor)*
/// factor   := name ("^" digits)?
/// name     := [A-Za-z_][A-Za-z0-9_]*
/// ```
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationDoc", into = "PresentationDoc")]
pub struct AlgebraPresentation {
    generators: Vec<Generator>,
    relations: Vec<Poly>,
}

#[derive(Serialize, Deserialize)]
struct PresentationDoc {
    generators: Vec<Generator>,
    #[serde(default)]
    relations: Vec<String>,
}

impl TryFrom<PresentationDoc> for AlgebraPresentation {
    type Error = Error;

    fn try_from(doc: PresentationDoc) -> Result<Self> {
        let free =
            AlgebraPresentation::free(doc.generators.iter().map(|g| (g.name.clone(), g.degree)))?;
        let relations = doc
            .relations
            .iter()
            .map(|r| free.parse_poly(r))
            .collect::<Result<Vec<_>>>()?;
        AlgebraPresentation::from_parts(doc.generators, relations)
    }
}

impl From<AlgebraPresentation> for PresentationDoc {
    fn from(p: AlgebraPresentation) -> Self {
        PresentationDoc {
            relations: p.relations.iter().map(|r| p.render(r)).collect(),
            generators: p.generators,
        }
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl AlgebraPresentation {
    /// The trivial algebra F2, identity for [`tensor`](Self::tensor).
    pub fn trivial() -> Self {
        Self {
            generators: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn free<S: Into<String>>(generators: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let generators = generators
            .into_iter()
            .map(|(name, degree)| Generator {
                name: name.into(),
                degree,
            })
            .collect();
        Self::from_parts(generators, Vec::new())
    }

    /// Builds a presentation from generator `(name, degree)` pairs and
    /// relations in the text format.
    pub fn new<S: Into<String>>(
        generators: impl IntoIterator<Item = (S, u32)>,
        relations: &[&str],
    ) -> Result<Self> {
        let free = Self::free(generators)?;
        let relations = relations
            .iter()
            .map(|r| free.parse_poly(r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(free.generators, relations)
    }

    pub fn from_parts(generators: Vec<Generator>, relations: Vec<Poly>) -> Result<Self> {
        let mut seen = HashMap::new();
        for g in &generators {
            if !is_name(&g.name) {
                return Err(Error::Parse {
                    input: g.name.clone(),
                    message: "generator names must match [A-Za-z_][A-Za-z0-9_]*".into(),
                });
            }
            if g.degree == 0 {
                return Err(Error::BadGeneratorDegree {
                    name: g.name.clone(),
                    degree: g.degree,
                });
            }
            if seen.insert(g.name.clone(), ()).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        let p = Self {
            generators,
            relations: Vec::new(),
        };
        let weights = p.weights();
        for r in &relations {
            if r.terms().any(|m| m.nvars() != weights.len()) {
                return Err(Error::DimensionMismatch {
                    expected: weights.len(),
                    found: r.terms().next().map_or(0, Monomial::nvars),
                });
            }
            if r.degrees(&weights).len() > 1 {
                return Err(Error::NonHomogeneous {
                    relation: p.render(r),
                });
            }
        }
        Ok(Self {
            relations: relations.into_iter().filter(|r| !r.is_zero()).collect(),
            ..p
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.degree(&self.weights())
    }

    /// Degree of a homogeneous polynomial; `None` for zero.
    pub fn poly_degree(&self, p: &Poly) -> Option<u32> {
        p.leading().map(|m| self.degree_of(m))
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations
            .iter()
            .filter_map(|r| self.poly_degree(r))
            .max()
            .unwrap_or(0)
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.nvars())
    }

    /// Parses a polynomial in this presentation's generators. Homogeneity
    /// is not checked here.
    pub fn parse_poly(&self, input: &str) -> Result<Poly> {
        let err = |message: String| Error::Parse {
            input: input.to_string(),
            message,
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty polynomial".into()));
        }
        if compact == "0" {
            return Ok(Poly::zero());
        }
        let mut poly = Poly::zero();
        for term in compact.split('+') {
            if term.is_empty() {
                return Err(err("empty term".into()));
            }
            let mut exps = vec![0u16; self.nvars()];
            if term != "1" {
                for factor in term.split('*') {
                    let (name, exp) = match factor.split_once('^') {
                        Some((n, e)) => {
                            let e: u16 = e
                                .parse()
                                .map_err(|_| err(format!("bad exponent in {factor:?}")))?;
                            (n, e)
                        }
                        None => (factor, 1),
                    };
                    if name == "1" {
                        continue;
                    }
                    let idx = self
                        .generator_index(name)
                        .ok_or_else(|| err(format!("unknown generator {name:?}")))?;
                    exps[idx] = exps[idx]
                        .checked_add(exp)
                        .ok_or_else(|| err("exponent overflow".into()))?;
                }
            }
            poly.toggle(Monomial::from_exponents(&exps));
        }
        Ok(poly)
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let factors: Vec<String> = m
            .exponents()
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| match e {
                1 => g.name.clone(),
                _ => format!("{}^{}", g.name, e),
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    /// Renders with the leading monomial first.
    pub fn render(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        p.terms()
            .map(|m| self.render_monomial(m))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// The same generators with extra relations appended.
    pub fn with_relations(&self, extra: impl IntoIterator<Item = Poly>) -> Result<Self> {
        let mut relations = self.relations.clone();
        relations.extend(extra);
        Self::from_parts(self.generators.clone(), relations)
    }

    /// The quotient by relations given in the text format.
    pub fn quotient(&self, extra: &[&str]) -> Result<Self> {
        let parsed = extra
            .iter()
            .map(|r| self.parse_poly(r))
            .collect::<Result<Vec<_>>>()?;
        self.with_relations(parsed)
    }

    /// Same presentation without the relation at `index`.
    pub fn without_relation(&self, index: usize) -> Self {
        let mut relations = self.relations.clone();
        relations.remove(index);
        Self {
            generators: self.generators.clone(),
            relations,
        }
    }

    /// Tensor product over F2. Generators of `other` whose names clash with
    /// ours are renamed `name_2`, `name_3`, … (first free suffix).
    pub fn tensor(&self, other: &AlgebraPresentation) -> AlgebraPresentation {
        let mut generators = self.generators.clone();
        for g in &other.generators {
            let mut name = g.name.clone();
            let mut k = 2;
            while generators.iter().any(|h| h.name == name) {
                name = format!("{}_{k}", g.name);
                k += 1;
            }
            generators.push(Generator {
                name,
                degree: g.degree,
            });
        }
        let n = generators.len();
        let offset = self.nvars();
        let relations = self
            .relations
            .iter()
            .map(|r| r.map_monomials(|m| m.embed(n, 0)))
            .chain(
                other
                    .relations
                    .iter()
                    .map(|r| r.map_monomials(|m| m.embed(n, offset))),
            )
            .collect();
        AlgebraPresentation {
            generators,
            relations,
        }
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("{}({})", g.name, g.degree))
            .collect();
        write!(f, "F2[{}]", gens.join(", "))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| self.render(r)).collect();
            write!(f, " / ({})", rels.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
