use serde::Serialize;

use super::ideal::GradedIdeal;
use crate::algebra::{ideal_piece, AlgebraMorphism, Element};
use crate::bundles::{assemble_equivariant_seeds, EquivariantBundleSpec};
use crate::error::Result;
use crate::linalg::Subspace;
use crate::spectral::Page;

/// The index together with the stable page it was read from.
#[derive(Clone, Debug)]
pub struct IndexComputation {
    pub ideal: GradedIdeal,
    pub page: Page,
}

impl IndexComputation {
    /// Dimensions of the bottom row of `E_∞`, degrees `0..=bound`.
    pub fn bottom_row(&self) -> Vec<usize> {
        (0..=self.page.bound())
            .map(|d| self.page.dim(d, 0))
            .collect()
    }
}

/// Runs the Borel spectral sequence of `spec` and collects everything the
/// differentials kill on the bottom row: the kernel of
/// `H*_G(B) → H*_G(E)`.
pub fn fh_index_computation(spec: &EquivariantBundleSpec, bound: u32) -> Result<IndexComputation> {
    let bundle = assemble_equivariant_seeds(spec, bound)?;
    let page = Page::run_to_einfty(&bundle.ring, &bundle.fiber, &bundle.seed, bound)?;
    let ring = &bundle.ring;
    let pieces = (0..=bound)
        .map(|d| {
            let dim = ring.dim(d);
            let Some(piece) = page.piece(d, 0) else {
                return Ok(Subspace::zero(dim));
            };
            let vectors = piece
                .boundaries()
                .basis()
                .iter()
                .map(|v| Ok(page.element(d, 0, v).transport(ring)?.coords()))
                .collect::<Result<Vec<_>>>()?;
            Ok(Subspace::span(dim, vectors))
        })
        .collect::<Result<Vec<_>>>()?;
    let hints: Vec<Element> = bundle.seed.images().values().cloned().collect();
    let ideal = GradedIdeal::from_pieces(ring, pieces, &hints)?;
    Ok(IndexComputation { ideal, page })
}

pub fn fh_index(spec: &EquivariantBundleSpec, bound: u32) -> Result<GradedIdeal> {
    Ok(fh_index_computation(spec, bound)?.ideal)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub holds: bool,
    pub first_failure: Option<u32>,
    pub degrees_checked: u32,
}

/// Whether `f(small) ⊆ large` degree by degree, for a ring map `f` from
/// the ambient ring of `small` to that of `large`.
pub fn check_monotonicity(
    small: &GradedIdeal,
    large: &GradedIdeal,
    f: &AlgebraMorphism,
) -> Result<MonotonicityReport> {
    let bound = small.bound().min(large.bound());
    let images = small
        .generators()
        .iter()
        .filter(|g| g.degree() <= bound)
        .map(|g| f.apply(g))
        .collect::<Result<Vec<_>>>()?;
    let mut first_failure = None;
    for d in 0..=bound {
        let pulled = ideal_piece(large.ring(), &images, d)?;
        let ok = large.piece(d).is_some_and(|p| p.contains_subspace(&pulled));
        if !ok && first_failure.is_none() {
            first_failure = Some(d);
        }
    }
    Ok(MonotonicityReport {
        holds: first_failure.is_none(),
        first_failure,
        degrees_checked: bound + 1,
    })
}
