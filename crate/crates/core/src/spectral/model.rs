use std::collections::BTreeMap;

use rayon::prelude::*;

use super::fiber::{FiberSpec, TransgressionSeed};
use crate::algebra::{AlgebraPresentation, Element, Monomial, RewriteSystem, Ring};
use crate::error::{Error, Result};
use crate::linalg::BitVec;

/// Coordinates of one total degree of the model, split by base degree `p`.
#[derive(Debug)]
pub(crate) struct Blocks {
    pdeg: Vec<u32>,
    local: Vec<usize>,
    by_p: BTreeMap<u32, Vec<usize>>,
}

/// The multiplicative model `H*(B) ⊗ H*(F)` with the derivation determined
/// by the transgression seeds, filtered by base degree.
///
/// The derivation vanishes on base generators and sends each fiber
/// generator to its seed, so it raises the base degree by at least two.
/// Its filtration spectral sequence is the one the pages compute.
#[derive(Debug)]
pub(crate) struct Model {
    base: Ring,
    fiber: FiberSpec,
    seed: TransgressionSeed,
    total: Ring,
    nbase: usize,
    bound: u32,
    seeds: Vec<Element>,
    blocks: Vec<Blocks>,
    dcols: Vec<Vec<BitVec>>,
}

impl Model {
    pub fn new(
        base: &Ring,
        fiber: &FiberSpec,
        seed: &TransgressionSeed,
        bound: u32,
    ) -> Result<Self> {
        seed.validate(fiber)?;
        let fp = fiber.presentation()?;
        let bp = base.source();
        for g in fp.generators() {
            if bp.generator_index(&g.name).is_some() {
                return Err(Error::InvalidSpec(format!(
                    "fiber generator {} clashes with a base generator",
                    g.name
                )));
            }
        }
        let top = bound + 1;
        let tensor = bp.tensor(&fp);
        let total = RewriteSystem::normalize(&tensor, top.max(tensor.max_relation_degree()))?;
        let nbase = bp.nvars();

        let seeds = fiber
            .generators()
            .iter()
            .map(|g| match seed.get(&g.name) {
                Some(img) if !img.is_zero() => img.transport(&total),
                _ => Ok(Element::zero(&total, g.degree + 1)),
            })
            .collect::<Result<Vec<_>>>()?;

        let weights = total.weights().to_vec();
        let blocks = (0..=top)
            .map(|n| {
                let basis = total.degree_basis(n).expect("within bound");
                let pdeg: Vec<u32> = basis
                    .iter()
                    .map(|m| {
                        m.exponents()[..nbase]
                            .iter()
                            .zip(&weights)
                            .map(|(e, w)| u32::from(*e) * w)
                            .sum()
                    })
                    .collect();
                let mut by_p: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
                let mut local = vec![0; pdeg.len()];
                for (i, p) in pdeg.iter().enumerate() {
                    let v = by_p.entry(*p).or_default();
                    local[i] = v.len();
                    v.push(i);
                }
                Blocks { pdeg, local, by_p }
            })
            .collect();

        let mut model = Model {
            base: base.clone(),
            fiber: fiber.clone(),
            seed: seed.clone(),
            total,
            nbase,
            bound,
            seeds,
            blocks,
            dcols: Vec::new(),
        };
        model.check_relations(&fp)?;
        model.dcols = (0..=bound)
            .map(|n| {
                let basis = model.total.degree_basis(n).expect("within bound");
                basis
                    .par_iter()
                    .map(|m| model.derive_monomial(m).map(|e| e.coords()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(model)
    }

    /// Derivation of a (not necessarily reduced) monomial, reduced.
    fn derive_monomial(&self, m: &Monomial) -> Result<Element> {
        let degree = self.total.degree_of(m) + 1;
        let mut acc = Element::zero(&self.total, degree);
        for (j, s) in self.seeds.iter().enumerate() {
            let idx = self.nbase + j;
            let e = m.exponents()[idx];
            if e.is_multiple_of(2) || s.is_zero() {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[idx] -= 1;
            let rest = Element::from_monomial(&self.total, Monomial::from_exponents(&exps))?;
            acc = acc.add(&rest.multiply(s)?)?;
        }
        Ok(acc)
    }

    /// The derivation has to kill every fiber relation, otherwise it does
    /// not descend to the quotient ring.
    fn check_relations(&self, fp: &AlgebraPresentation) -> Result<()> {
        let n = self.total.nvars();
        for r in fp.relations() {
            let d = fp.poly_degree(r).unwrap_or(0);
            if d + 1 > self.total.bound() {
                continue;
            }
            let mut acc = Element::zero(&self.total, d + 1);
            for m in r.terms() {
                acc = acc.add(&self.derive_monomial(&m.embed(n, self.nbase))?)?;
            }
            if !acc.is_zero() {
                return Err(Error::InvalidSeed(format!(
                    "the derivation does not respect the fiber relation {} (its image is {})",
                    fp.render(r),
                    acc
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn fiber(&self) -> &FiberSpec {
        &self.fiber
    }

    pub fn total(&self) -> &Ring {
        &self.total
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Highest total degree carried by the pages.
    pub fn top(&self) -> u32 {
        self.bound + 1
    }

    pub fn seed(&self) -> &TransgressionSeed {
        &self.seed
    }

    pub fn seed_elements(&self) -> &[Element] {
        &self.seeds
    }

    pub fn dim(&self, n: u32) -> usize {
        self.blocks.get(n as usize).map_or(0, |b| b.pdeg.len())
    }

    pub fn bidegrees(&self, n: u32) -> Vec<u32> {
        self.blocks
            .get(n as usize)
            .map(|b| b.by_p.keys().copied().collect())
            .unwrap_or_default()
    }

    pub fn block(&self, n: u32, p: u32) -> &[usize] {
        self.blocks
            .get(n as usize)
            .and_then(|b| b.by_p.get(&p))
            .map_or(&[], Vec::as_slice)
    }

    pub fn block_dim(&self, n: u32, p: u32) -> usize {
        self.block(n, p).len()
    }

    /// The `p` component of a vector in degree `n`, in block coordinates.
    pub fn project(&self, n: u32, p: u32, v: &BitVec) -> BitVec {
        let b = &self.blocks[n as usize];
        let mut out = BitVec::zeros(self.block_dim(n, p));
        for i in v.ones() {
            if b.pdeg[i] == p {
                out.flip(b.local[i]);
            }
        }
        out
    }

    pub fn include(&self, n: u32, p: u32, local: &BitVec) -> BitVec {
        let idx = self.block(n, p);
        BitVec::from_indices(self.dim(n), local.ones().map(|i| idx[i]))
    }

    /// Smallest base degree among the terms of `v`.
    pub fn filtration(&self, n: u32, v: &BitVec) -> Option<u32> {
        let b = &self.blocks[n as usize];
        v.ones().map(|i| b.pdeg[i]).min()
    }

    /// The derivation applied to a degree-`n` vector.
    pub fn apply(&self, n: u32, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.dim(n + 1));
        for i in v.ones() {
            out += &self.dcols[n as usize][i];
        }
        out
    }

    pub fn d_element(&self, e: &Element) -> Result<Element> {
        let e = e.transport(&self.total)?;
        if e.degree() > self.bound {
            return Err(Error::BoundExceeded {
                degree: e.degree(),
                bound: self.bound,
            });
        }
        Element::from_coords(
            &self.total,
            &self.apply(e.degree(), &e.coords()),
            e.degree() + 1,
        )
    }

    pub fn local_element(&self, n: u32, p: u32, local: &BitVec) -> Element {
        Element::from_coords(&self.total, &self.include(n, p, local), n).expect("block vector")
    }

    pub fn label(&self, n: u32, p: u32, local: &BitVec) -> String {
        self.local_element(n, p, local).render()
    }

    /// Splits an element of the model into its base-degree components.
    pub fn components(&self, e: &Element) -> Result<BTreeMap<u32, BitVec>> {
        let e = e.transport(&self.total)?;
        let n = e.degree();
        if n > self.top() {
            return Err(Error::BoundExceeded {
                degree: n,
                bound: self.top(),
            });
        }
        let v = e.coords();
        Ok(self
            .bidegrees(n)
            .into_iter()
            .map(|p| (p, self.project(n, p, &v)))
            .filter(|(_, w)| !w.is_zero())
            .collect())
    }
}
