use std::collections::HashMap;

use serde::Serialize;

use super::page::Page;
use crate::algebra::{
    AlgebraPresentation, Element, Generator, Monomial, Poly, RewriteSystem, Ring,
};
use crate::error::Result;
use crate::linalg::{quotient_reps, BitMatrix, BitVec, Subspace};

/// A generator of the reconstructed ring and the `E_∞` class it stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorLabel {
    pub name: String,
    pub degree: u32,
    pub p: u32,
    pub q: u32,
    pub representative: String,
}

/// A relation of `E_∞` that might not lift to the total space as stated,
/// because classes of higher filtration exist in its degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenExtension {
    pub relation: String,
    pub degree: u32,
    pub p: u32,
    pub q: u32,
    pub higher_filtration_dim: usize,
}

#[derive(Clone, Debug)]
pub enum RingReconstruction {
    Presented {
        presentation: AlgebraPresentation,
        labels: Vec<GeneratorLabel>,
        open_extensions: Vec<OpenExtension>,
    },
    AdditiveOnly {
        totals: Vec<usize>,
        reason: String,
    },
}

impl RingReconstruction {
    pub fn presentation(&self) -> Option<&AlgebraPresentation> {
        match self {
            RingReconstruction::Presented { presentation, .. } => Some(presentation),
            RingReconstruction::AdditiveOnly { .. } => None,
        }
    }

    /// Presented with no open extension problem.
    pub fn is_determined(&self) -> bool {
        matches!(self, RingReconstruction::Presented { open_extensions, .. } if open_extensions.is_empty())
    }
}

struct Builder<'a> {
    page: &'a Page,
    bound: u32,
    gens: Vec<Generator>,
    bideg: Vec<(u32, u32)>,
    reps: Vec<Element>,
    relations: Vec<Poly>,
    ring: Ring,
    values: HashMap<Monomial, Element>,
}

impl Builder<'_> {
    fn rebuild(&mut self) -> Result<()> {
        let n = self.gens.len();
        let rels = self
            .relations
            .iter()
            .map(|r| Poly::from_monomials(r.terms().map(|m| m.embed(n, 0))))
            .collect();
        self.relations = rels;
        let p = AlgebraPresentation::from_parts(self.gens.clone(), self.relations.clone())?;
        self.ring = RewriteSystem::normalize(&p, self.bound)?;
        self.values.clear();
        Ok(())
    }

    fn pdeg(&self, m: &Monomial) -> u32 {
        m.exponents()
            .iter()
            .zip(&self.bideg)
            .map(|(e, (p, _))| u32::from(*e) * p)
            .sum()
    }

    /// The product of representatives named by `m`, in the E_2 ring.
    fn value(&mut self, m: &Monomial) -> Result<Element> {
        if let Some(v) = self.values.get(m) {
            return Ok(v.clone());
        }
        let v = match m.exponents().iter().position(|e| *e > 0) {
            None => Element::one(self.page.e2_ring()),
            Some(i) => {
                let rest = m.div(&Monomial::var(m.nvars(), i));
                self.value(&rest)?.multiply(&self.reps[i])?
            }
        };
        self.values.insert(m.clone(), v.clone());
        Ok(v)
    }

    /// Class coordinates in `E_∞^{p,q}` of the image of `m`.
    fn class(
        &mut self,
        m: &Monomial,
        p: u32,
        q: u32,
    ) -> Result<std::result::Result<BitVec, String>> {
        let dim = self.page.dim(p, q);
        let v = self.value(m)?;
        if v.is_zero() {
            return Ok(Ok(BitVec::zeros(dim)));
        }
        Ok(match self.page.class_of(&v)? {
            Some((pp, qq, c)) if (pp, qq) == (p, q) => Ok(c),
            _ => Err(format!(
                "the product {} is not a cycle at ({p}, {q})",
                self.ring.source().render_monomial(m)
            )),
        })
    }
}

/// Reads a presentation off a stable page from multiplicative generators of
/// `E_∞`. Relations that hold in `E_∞` but sit below nonzero classes of
/// higher filtration are reported as open extensions rather than resolved.
pub fn reconstruct_ring(page: &Page) -> Result<RingReconstruction> {
    let totals = page.additive_total();
    let additive = |reason: String| {
        Ok(RingReconstruction::AdditiveOnly {
            totals: totals.clone(),
            reason,
        })
    };
    if !page.is_stable() {
        return additive(format!("page {} is not stable", page.r()));
    }
    let bound = page.bound();
    let mut b = Builder {
        page,
        bound,
        gens: Vec::new(),
        bideg: Vec::new(),
        reps: Vec::new(),
        relations: Vec::new(),
        ring: RewriteSystem::normalize(&AlgebraPresentation::trivial(), bound)?,
        values: HashMap::new(),
    };
    let mut labels = Vec::new();
    let mut open = Vec::new();

    for n in 1..=bound {
        let mut by_p: Vec<(u32, Vec<Monomial>)> = Vec::new();
        for m in b.ring.degree_basis(n)?.to_vec() {
            let p = b.pdeg(&m);
            match by_p.iter_mut().find(|(pp, _)| *pp == p) {
                Some((_, v)) => v.push(m),
                None => by_p.push((p, vec![m])),
            }
        }

        let mut new_rels = Vec::new();
        for (p, monos) in &by_p {
            let (p, q) = (*p, n - *p);
            let mut cols = Vec::new();
            for m in monos {
                match b.class(m, p, q)? {
                    Ok(c) => cols.push(c),
                    Err(reason) => return additive(reason),
                }
            }
            let map = BitMatrix::from_columns(page.dim(p, q), &cols);
            for kappa in map.kernel_basis().basis() {
                let rel = Poly::from_monomials(kappa.ones().map(|i| monos[i].clone()));
                let higher: usize = (p + 1..=n).map(|pp| page.dim(pp, n - pp)).sum();
                if higher > 0 {
                    open.push(OpenExtension {
                        relation: b.ring.source().render(&rel),
                        degree: n,
                        p,
                        q,
                        higher_filtration_dim: higher,
                    });
                }
                new_rels.push(rel);
            }
        }

        let mut new_gens = Vec::new();
        for p in 0..=n {
            let q = n - p;
            let dim = page.dim(p, q);
            if dim == 0 {
                continue;
            }
            let monos = by_p
                .iter()
                .find(|(pp, _)| *pp == p)
                .map(|(_, v)| v.clone())
                .unwrap_or_default();
            let mut image = Vec::new();
            for m in &monos {
                match b.class(m, p, q)? {
                    Ok(c) => image.push(c),
                    Err(reason) => return additive(reason),
                }
            }
            let image = Subspace::span(dim, image);
            for c in quotient_reps(&image, &Subspace::full(dim))? {
                let piece = page.piece(p, q).expect("nonzero piece");
                new_gens.push((p, q, page.element(p, q, &piece.lift(&c))));
            }
        }

        if new_rels.is_empty() && new_gens.is_empty() {
            continue;
        }
        b.relations.extend(new_rels);
        let several = new_gens.len() > 1;
        for (k, (p, q, rep)) in new_gens.into_iter().enumerate() {
            let name = single_generator(&rep)
                .filter(|s| b.gens.iter().all(|g| &g.name != s))
                .unwrap_or_else(|| {
                    if several {
                        format!("g{n}_{}", k + 1)
                    } else {
                        format!("g{n}")
                    }
                });
            labels.push(GeneratorLabel {
                name: name.clone(),
                degree: n,
                p,
                q,
                representative: rep.render(),
            });
            b.gens.push(Generator { name, degree: n });
            b.bideg.push((p, q));
            b.reps.push(rep);
        }
        b.rebuild()?;
    }

    let series = b.ring.hilbert_series(bound)?;
    if series != totals {
        return additive(format!(
            "presented ring has series {series:?}, expected {totals:?}"
        ));
    }
    Ok(RingReconstruction::Presented {
        presentation: b.ring.source().clone(),
        labels,
        open_extensions: open,
    })
}

fn single_generator(e: &Element) -> Option<String> {
    let mut terms = e.poly().terms();
    let m = terms.next()?;
    if terms.next().is_some() {
        return None;
    }
    let exps = m.exponents();
    let i = exps.iter().position(|x| *x > 0)?;
    (exps[i] == 1 && exps.iter().filter(|x| **x > 0).count() == 1)
        .then(|| e.ring().source().generators()[i].name.clone())
}
