use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use super::monomial::{Monomial, Poly};
use super::presentation::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::linalg::BitVec;

/// Shared handle to a normalized algebra. Elements and morphisms hold one.
pub type Ring = Arc<RewriteSystem>;

/// A reduced Gröbner basis of a presentation's relations, complete in every
/// degree up to `bound`, plus the normal-form monomial bases it induces.
pub struct RewriteSystem {
    source: AlgebraPresentation,
    bound: u32,
    weights: Vec<u32>,
    rules: Vec<(Monomial, Poly)>,
    bases: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    cache: RwLock<HashMap<Monomial, Poly>>,
}

/// Fully reduces `p` by the polynomials in `basis`, each keyed by its
/// leading monomial.
fn reduce_by(p: &Poly, basis: &[Poly]) -> Poly {
    let mut work = p.clone();
    let mut out = Poly::zero();
    while let Some(m) = work.leading().cloned() {
        match basis
            .iter()
            .find(|g| g.leading().is_some_and(|l| l.divides(&m)))
        {
            Some(g) => {
                let q = m.div(g.leading().unwrap());
                work.add_assign(&g.mul_monomial(&q));
            }
            None => {
                work.remove(&m);
                out.toggle(m);
            }
        }
    }
    out
}

fn buchberger(p: &AlgebraPresentation, bound: u32) -> Vec<(Monomial, Poly)> {
    let weights = p.weights();
    let deg = |m: &Monomial| m.degree(&weights);

    let mut relations: Vec<Poly> = p.relations().to_vec();
    relations.sort_by_key(|r| r.leading().map(deg));

    let mut basis: Vec<Poly> = Vec::new();
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let add = |g: Poly, basis: &mut Vec<Poly>, pairs: &mut BTreeSet<(u32, usize, usize)>| {
        let lm = g.leading().unwrap().clone();
        let j = basis.len();
        for (i, h) in basis.iter().enumerate() {
            let hl = h.leading().unwrap();
            if hl.coprime(&lm) {
                continue;
            }
            let d = deg(&hl.lcm(&lm));
            if d <= bound {
                pairs.insert((d, i, j));
            }
        }
        basis.push(g);
    };

    // Relations and S-polynomials are interleaved by degree so that every
    // polynomial entering the basis is reduced against all lower degrees.
    let mut pending = relations.into_iter().peekable();
    loop {
        let next_pair = pairs.first().map(|t| t.0);
        let next_rel = pending.peek().and_then(|r| r.leading()).map(deg);
        let g = match (next_rel, next_pair) {
            (None, None) => break,
            (Some(dr), dp) if dp.is_none_or(|dp| dr <= dp) => {
                let r = pending.next().unwrap();
                if dr > bound {
                    continue;
                }
                r
            }
            _ => {
                let (_, i, j) = pairs.pop_first().unwrap();
                let (gi, gj) = (&basis[i], &basis[j]);
                let (li, lj) = (gi.leading().unwrap(), gj.leading().unwrap());
                let l = li.lcm(lj);
                let mut s = gi.mul_monomial(&l.div(li));
                s.add_assign(&gj.mul_monomial(&l.div(lj)));
                s
            }
        };
        let g = reduce_by(&g, &basis);
        if !g.is_zero() {
            add(g, &mut basis, &mut pairs);
        }
    }

    // Inter-reduce to the unique reduced basis.
    let minimal: Vec<Poly> = basis
        .iter()
        .enumerate()
        .filter(|(i, g)| {
            let l = g.leading().unwrap();
            !basis.iter().enumerate().any(|(j, h)| {
                let hl = h.leading().unwrap();
                hl.divides(l) && (hl != l || j < *i)
            })
        })
        .map(|(_, g)| g.clone())
        .collect();
    let mut rules: Vec<(Monomial, Poly)> = minimal
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let lm = g.leading().unwrap().clone();
            let mut tail = g.clone();
            tail.remove(&lm);
            let others: Vec<Poly> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, h)| h.clone())
                .collect();
            (lm, reduce_by(&tail, &others))
        })
        .collect();
    rules.sort_by(|a, b| deg(&a.0).cmp(&deg(&b.0)).then(b.0.cmp(&a.0)));
    rules
}

/// Normal-form monomials of degree `d`, largest first.
fn enumerate_basis(weights: &[u32], lhs: &[Monomial], d: u32) -> Vec<Monomial> {
    fn go(
        weights: &[u32],
        lhs: &[Monomial],
        var: usize,
        left: u32,
        exps: &mut Vec<u16>,
        out: &mut Vec<Monomial>,
    ) {
        if var == weights.len() {
            if left == 0 {
                out.push(Monomial::from_exponents(exps));
            }
            return;
        }
        let w = weights[var];
        let mut e = 0u16;
        loop {
            exps[var] = e;
            let m = Monomial::from_exponents(exps);
            if lhs.iter().any(|l| l.divides(&m)) {
                break;
            }
            go(weights, lhs, var + 1, left - u32::from(e) * w, exps, out);
            if u32::from(e + 1) * w > left {
                break;
            }
            e += 1;
        }
        exps[var] = 0;
    }
    let mut out = Vec::new();
    let mut exps = vec![0u16; weights.len()];
    go(weights, lhs, 0, d, &mut exps, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

impl RewriteSystem {
    /// Completes the relations of `p` up to degree `bound`.
    pub fn normalize(p: &AlgebraPresentation, bound: u32) -> Result<Ring> {
        let needed = p.max_relation_degree();
        if bound < needed {
            return Err(Error::BoundTooSmall { bound, needed });
        }
        if bound > u32::from(u16::MAX) {
            return Err(Error::BoundExceeded {
                degree: bound,
                bound: u32::from(u16::MAX),
            });
        }
        let weights = p.weights();
        let rules = buchberger(p, bound);
        let lhs: Vec<Monomial> = rules.iter().map(|r| r.0.clone()).collect();
        let bases: Vec<Vec<Monomial>> = (0..=bound)
            .map(|d| enumerate_basis(&weights, &lhs, d))
            .collect();
        let index = bases
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();
        Ok(Arc::new(RewriteSystem {
            source: p.clone(),
            bound,
            weights,
            rules,
            bases,
            index,
            cache: RwLock::new(HashMap::new()),
        }))
    }

    pub fn source(&self) -> &AlgebraPresentation {
        &self.source
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn rules(&self) -> &[(Monomial, Poly)] {
        &self.rules
    }

    /// Rules rendered as `lhs -> rhs`.
    pub fn rule_strings(&self) -> Vec<String> {
        self.rules
            .iter()
            .map(|(l, r)| {
                format!(
                    "{} -> {}",
                    self.source.render_monomial(l),
                    self.source.render(r)
                )
            })
            .collect()
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.degree(&self.weights)
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if d > self.bound {
            Err(Error::BoundExceeded {
                degree: d,
                bound: self.bound,
            })
        } else {
            Ok(())
        }
    }

    /// Normal-form monomials of degree `d`, largest first.
    pub fn degree_basis(&self, d: u32) -> Result<&[Monomial]> {
        self.check_degree(d)?;
        Ok(&self.bases[d as usize])
    }

    pub fn dim(&self, d: u32) -> usize {
        self.bases.get(d as usize).map_or(0, Vec::len)
    }

    /// Position of a normal-form monomial in its degree basis.
    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index
            .get(self.degree_of(m) as usize)
            .and_then(|ix| ix.get(m).copied())
    }

    /// Piece dimensions for degrees `0..=bound`.
    pub fn hilbert_series(&self, bound: u32) -> Result<Vec<usize>> {
        self.check_degree(bound)?;
        Ok((0..=bound).map(|d| self.dim(d)).collect())
    }

    fn rule_for(&self, m: &Monomial) -> Option<&(Monomial, Poly)> {
        self.rules.iter().find(|(l, _)| l.divides(m))
    }

    /// Normal form of a single monomial.
    pub fn normal_form_monomial(&self, m: &Monomial) -> Result<Poly> {
        self.check_degree(self.degree_of(m))?;
        Ok(self.nf_monomial(m))
    }

    fn nf_monomial(&self, m: &Monomial) -> Poly {
        if let Some(p) = self.cache.read().unwrap().get(m) {
            return p.clone();
        }
        let nf = match self.rule_for(m) {
            None => Poly::monomial(m.clone()),
            Some((l, tail)) => {
                let q = m.div(l);
                let mut acc = Poly::zero();
                for t in tail.terms() {
                    acc.add_assign(&self.nf_monomial(&t.mul(&q)));
                }
                acc
            }
        };
        self.cache.write().unwrap().insert(m.clone(), nf.clone());
        nf
    }

    /// Normal form of a homogeneous or inhomogeneous polynomial whose terms
    /// all lie within the bound.
    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        let mut acc = Poly::zero();
        for m in p.terms() {
            self.check_degree(self.degree_of(m))?;
            acc.add_assign(&self.nf_monomial(m));
        }
        Ok(acc)
    }

    /// Reduces by single rewriting steps, letting `pick` choose which of the
    /// `n` available (term, rule) redexes to apply next. Confluence means the
    /// result never depends on the choices.
    pub fn reduce_with(&self, p: &Poly, mut pick: impl FnMut(usize) -> usize) -> Result<Poly> {
        for m in p.terms() {
            self.check_degree(self.degree_of(m))?;
        }
        let mut work = p.clone();
        loop {
            let redexes: Vec<(Monomial, usize)> = work
                .terms()
                .flat_map(|m| {
                    self.rules
                        .iter()
                        .enumerate()
                        .filter(|(_, (l, _))| l.divides(m))
                        .map(move |(i, _)| (m.clone(), i))
                })
                .collect();
            if redexes.is_empty() {
                return Ok(work);
            }
            let (m, i) = &redexes[pick(redexes.len()) % redexes.len()];
            let (l, tail) = &self.rules[*i];
            let q = m.div(l);
            work.remove(m);
            work.add_assign(&tail.mul_monomial(&q));
        }
    }

    /// Coordinates of a reduced homogeneous polynomial of degree `d`.
    pub fn coords(&self, p: &Poly, d: u32) -> Result<BitVec> {
        self.check_degree(d)?;
        let ix = &self.index[d as usize];
        let mut v = BitVec::zeros(ix.len());
        for m in p.terms() {
            match ix.get(m) {
                Some(i) => v.flip(*i),
                None => {
                    return Err(Error::DegreeMismatch(format!(
                        "{} is not a normal-form monomial of degree {d}",
                        self.source.render_monomial(m)
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn from_coords(&self, v: &BitVec, d: u32) -> Result<Poly> {
        let basis = self.degree_basis(d)?;
        if v.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: v.len(),
            });
        }
        Ok(Poly::from_monomials(v.ones().map(|i| basis[i].clone())))
    }

    /// Coordinates of the product of two basis monomials.
    pub fn product_coords(&self, a: &Monomial, b: &Monomial) -> Result<BitVec> {
        let m = a.mul(b);
        let d = self.degree_of(&m);
        self.check_degree(d)?;
        self.coords(&self.nf_monomial(&m), d)
    }
}

impl fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteSystem")
            .field("source", &self.source)
            .field("bound", &self.bound)
            .field("rules", &self.rule_strings())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules_of(p: &AlgebraPresentation, bound: u32) -> Vec<String> {
        RewriteSystem::normalize(p, bound).unwrap().rule_strings()
    }

    #[test]
    fn exterior_single_rule() {
        let p = AlgebraPresentation::new([("x", 1)], &["x^2"]).unwrap();
        assert_eq!(rules_of(&p, 10), ["x^2 -> 0"]);
    }

    #[test]
    fn g2_so4_completion() {
        let p =
            AlgebraPresentation::new([("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"]).unwrap();
        assert_eq!(
            rules_of(&p, 20),
            ["u3^2 -> u2^3", "u2^2*u3 -> 0", "u2^5 -> 0"]
        );
        let rs = RewriteSystem::normalize(&p, 20).unwrap();
        assert_eq!(rs.hilbert_series(8).unwrap(), [1, 0, 1, 1, 1, 1, 1, 0, 1]);
        let d6: Vec<String> = rs
            .degree_basis(6)
            .unwrap()
            .iter()
            .map(|m| p.render_monomial(m))
            .collect();
        assert_eq!(d6, ["u2^3"]);
        assert_eq!(rs.hilbert_series(20).unwrap()[9..], [0; 12]);
    }

    #[test]
    fn free_ring_has_no_rules() {
        let p = AlgebraPresentation::free([("t", 1)]).unwrap();
        let rs = RewriteSystem::normalize(&p, 20).unwrap();
        assert!(rs.rules().is_empty());
        assert_eq!(rs.hilbert_series(20).unwrap(), vec![1; 21]);
    }

    #[test]
    fn truncated_polynomial_basis() {
        let p = AlgebraPresentation::new([("x", 6), ("y", 2)], &["x^2", "y^3"]).unwrap();
        let rs = RewriteSystem::normalize(&p, 12).unwrap();
        let d8: Vec<String> = rs
            .degree_basis(8)
            .unwrap()
            .iter()
            .map(|m| p.render_monomial(m))
            .collect();
        assert_eq!(d8, ["x*y"]);
        assert_eq!(
            rs.hilbert_series(10).unwrap(),
            [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]
        );
        assert_eq!(rs.degree_basis(0).unwrap().len(), 1);
        assert!(rs.degree_basis(13).is_err());
    }

    #[test]
    fn bound_below_relations_rejected() {
        let p = AlgebraPresentation::new([("x", 2)], &["x^3"]).unwrap();
        assert!(matches!(
            RewriteSystem::normalize(&p, 5),
            Err(Error::BoundTooSmall { .. })
        ));
    }

    #[test]
    fn reduce_with_any_order_agrees() {
        let p =
            AlgebraPresentation::new([("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"]).unwrap();
        let rs = RewriteSystem::normalize(&p, 20).unwrap();
        let f = p.parse_poly("u3^4 + u2^3*u3^2 + u2*u3^2").unwrap();
        let nf = rs.reduce(&f).unwrap();
        for seed in 0..20usize {
            let mut k = seed;
            let alt = rs
                .reduce_with(&f, |n| {
                    k = k.wrapping_mul(31).wrapping_add(7);
                    k % n
                })
                .unwrap();
            assert_eq!(alt, nf);
        }
    }
}
