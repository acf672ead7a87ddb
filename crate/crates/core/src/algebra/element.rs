use std::fmt;
use std::sync::Arc;

use super::monomial::{Monomial, Poly};
use super::rewrite::Ring;
use crate::error::{Error, Result};
use crate::linalg::{BitVec, Subspace};

/// A homogeneous element of a normalized algebra, stored in normal form.
#[derive(Clone)]
pub struct Element {
    ring: Ring,
    degree: u32,
    poly: Poly,
}

fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || (a.bound() == b.bound() && a.source() == b.source())
}

impl Element {
    pub fn zero(ring: &Ring, degree: u32) -> Element {
        Element {
            ring: ring.clone(),
            degree,
            poly: Poly::zero(),
        }
    }

    pub fn one(ring: &Ring) -> Element {
        Element {
            ring: ring.clone(),
            degree: 0,
            poly: Poly::monomial(Monomial::one(ring.nvars())),
        }
    }

    pub fn generator(ring: &Ring, name: &str) -> Result<Element> {
        let i = ring
            .source()
            .generator_index(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Element::from_monomial(ring, Monomial::var(ring.nvars(), i))
    }

    pub fn from_monomial(ring: &Ring, m: Monomial) -> Result<Element> {
        let degree = ring.degree_of(&m);
        let poly = ring.normal_form_monomial(&m)?;
        Ok(Element {
            ring: ring.clone(),
            degree,
            poly,
        })
    }

    /// Reduces a homogeneous polynomial. The zero polynomial needs an
    /// explicit degree, see [`from_poly_in_degree`](Self::from_poly_in_degree).
    pub fn from_poly(ring: &Ring, p: &Poly) -> Result<Element> {
        let degrees = p.degrees(ring.weights());
        let mut it = degrees.iter();
        match (it.next(), it.next()) {
            (Some(d), None) => Self::from_poly_in_degree(ring, p, *d),
            (None, _) => Ok(Element::zero(ring, 0)),
            _ => Err(Error::NonHomogeneous {
                relation: ring.source().render(p),
            }),
        }
    }

    pub fn from_poly_in_degree(ring: &Ring, p: &Poly, degree: u32) -> Result<Element> {
        if p.terms().any(|m| ring.degree_of(m) != degree) {
            return Err(Error::DegreeMismatch(format!(
                "{} is not homogeneous of degree {degree}",
                ring.source().render(p)
            )));
        }
        if degree > ring.bound() {
            return Err(Error::BoundExceeded {
                degree,
                bound: ring.bound(),
            });
        }
        Ok(Element {
            ring: ring.clone(),
            degree,
            poly: ring.reduce(p)?,
        })
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<Element> {
        let p = ring.source().parse_poly(s)?;
        Self::from_poly(ring, &p)
    }

    /// Like [`parse`](Self::parse) but fixes the degree, so `"0"` is
    /// accepted in any degree.
    pub fn parse_in_degree(ring: &Ring, s: &str, degree: u32) -> Result<Element> {
        let p = ring.source().parse_poly(s)?;
        Self::from_poly_in_degree(ring, &p, degree)
    }

    pub fn from_coords(ring: &Ring, v: &BitVec, degree: u32) -> Result<Element> {
        Ok(Element {
            ring: ring.clone(),
            degree,
            poly: ring.from_coords(v, degree)?,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coords(&self) -> BitVec {
        self.ring
            .coords(&self.poly, self.degree)
            .expect("element is stored in normal form")
    }

    fn check_compatible(&self, other: &Element) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_compatible(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "cannot add elements of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let degree = if self.is_zero() {
            other.degree
        } else {
            self.degree
        };
        let mut poly = self.poly.clone();
        poly.add_assign(&other.poly);
        Ok(Element {
            ring: self.ring.clone(),
            degree,
            poly,
        })
    }

    pub fn multiply(&self, other: &Element) -> Result<Element> {
        self.check_compatible(other)?;
        let degree = self.degree + other.degree;
        if degree > self.ring.bound() {
            return Err(Error::BoundExceeded {
                degree,
                bound: self.ring.bound(),
            });
        }
        let mut poly = Poly::zero();
        for a in self.poly.terms() {
            for b in other.poly.terms() {
                poly.add_assign(&self.ring.normal_form_monomial(&a.mul(b))?);
            }
        }
        Ok(Element {
            ring: self.ring.clone(),
            degree,
            poly,
        })
    }

    pub fn pow(&self, e: u32) -> Result<Element> {
        let mut acc = Element::one(&self.ring);
        for _ in 0..e {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<Element> {
        self.multiply(&Element::from_monomial(&self.ring, m.clone())?)
    }

    /// Rewrites this element in `target`, matching generators by name. Only
    /// generators that occur in the element need to exist in `target`.
    pub fn transport(&self, target: &Ring) -> Result<Element> {
        let src = self.ring.source();
        let map: Vec<Option<usize>> = src
            .generators()
            .iter()
            .map(|g| target.source().generator_index(&g.name))
            .collect();
        let n = target.nvars();
        let terms = self
            .poly
            .terms()
            .map(|m| {
                let mut exps = vec![0u16; n];
                for (i, e) in m.exponents().iter().enumerate().filter(|(_, e)| **e > 0) {
                    let j = map[i]
                        .ok_or_else(|| Error::UnknownGenerator(src.generators()[i].name.clone()))?;
                    exps[j] += e;
                }
                Ok(Monomial::from_exponents(&exps))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_poly_in_degree(target, &Poly::from_monomials(terms), self.degree)
    }

    pub fn render(&self) -> String {
        self.ring.source().render(&self.poly)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring)
            && self.poly == other.poly
            && (self.degree == other.degree || self.poly.is_zero())
    }
}

impl Eq for Element {}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (deg {})", self.render(), self.degree)
    }
}

/// Degree-`d` piece of the ideal generated by `gens`, as a subspace of the
/// degree-`d` piece of the ring.
pub fn ideal_piece(ring: &Ring, gens: &[Element], d: u32) -> Result<Subspace> {
    let dim = ring.degree_basis(d)?.len();
    let mut span = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero() && g.degree() <= d) {
        for m in ring.degree_basis(d - g.degree())? {
            let p = g.mul_monomial(m)?;
            if !p.is_zero() {
                span.push(p.coords());
            }
        }
    }
    Ok(Subspace::span(dim, span))
}

/// Whether `e` lies in the ideal generated by `gens`, decided in the degree
/// of `e`.
pub fn ideal_membership(e: &Element, gens: &[Element]) -> Result<bool> {
    if e.is_zero() {
        return Ok(true);
    }
    Ok(ideal_piece(e.ring(), gens, e.degree())?.contains(&e.coords()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraPresentation, RewriteSystem};

    fn so4() -> Ring {
        let p =
            AlgebraPresentation::new([("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"]).unwrap();
        RewriteSystem::normalize(&p, 20).unwrap()
    }

    fn borel_so4() -> Ring {
        let t = AlgebraPresentation::free([("t", 1)]).unwrap();
        let p =
            AlgebraPresentation::new([("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"]).unwrap();
        RewriteSystem::normalize(&t.tensor(&p), 16).unwrap()
    }

    #[test]
    fn products_in_g2_so4() {
        let r = so4();
        let u2 = Element::generator(&r, "u2").unwrap();
        let u3 = Element::generator(&r, "u3").unwrap();
        assert!(u2.pow(2).unwrap().multiply(&u3).unwrap().is_zero());
        assert_eq!(u3.multiply(&u3).unwrap(), u2.pow(3).unwrap());
        assert_eq!(Element::one(&r).multiply(&u3).unwrap(), u3);
    }

    #[test]
    fn bound_overflow_is_reported() {
        let p = AlgebraPresentation::free([("t", 1)]).unwrap();
        let r = RewriteSystem::normalize(&p, 4).unwrap();
        let t = Element::generator(&r, "t").unwrap();
        assert!(matches!(t.pow(5), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn tensor_degree_three_piece() {
        let r = borel_so4();
        let d3: Vec<String> = r
            .degree_basis(3)
            .unwrap()
            .iter()
            .map(|m| r.source().render_monomial(m))
            .collect();
        assert_eq!(d3.len(), 3);
        for name in ["t^3", "t*u2", "u3"] {
            assert!(d3.iter().any(|s| s == name), "{name} missing from {d3:?}");
        }
    }

    #[test]
    fn membership_in_principal_ideal() {
        let r = borel_so4();
        let q = Element::parse(&r, "t^3 + u2*t + u3").unwrap();
        let u3 = Element::parse(&r, "u3").unwrap();
        let t = Element::parse(&r, "t").unwrap();
        assert!(!ideal_membership(&u3, &[q.clone()]).unwrap());
        assert!(ideal_membership(&t.multiply(&q).unwrap(), &[q.clone()]).unwrap());
        assert!(ideal_membership(&Element::zero(&r, 5), &[q.clone()]).unwrap());
        assert!(ideal_membership(&q, &[q.clone()]).unwrap());
    }

    #[test]
    fn coords_round_trip() {
        let r = borel_so4();
        let e = Element::parse(&r, "t^4 + t^2*u2 + u2^2 + t*u3").unwrap();
        let back = Element::from_coords(&r, &e.coords(), 4).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn transport_by_name() {
        let small = so4();
        let big = borel_so4();
        let e = Element::parse(&small, "u3^2").unwrap();
        let moved = e.transport(&big).unwrap();
        assert_eq!(moved, Element::parse(&big, "u2^3").unwrap());
    }
}
