use serde::Serialize;

use crate::algebra::{ideal_membership, ideal_piece, Element, Ring};
use crate::error::{Error, Result};
use crate::linalg::{BitVec, Subspace};

/// A homogeneous ideal known in every degree up to its bound, with a
/// minimal generating set.
#[derive(Clone, Debug)]
pub struct GradedIdeal {
    ring: Ring,
    pieces: Vec<Subspace>,
    generators: Vec<Element>,
}

impl GradedIdeal {
    /// Builds the ideal from its per-degree pieces (index = degree) and
    /// extracts generators degree by degree. Within a degree the `hints`
    /// are tried first; remaining gaps are filled from the reduced basis of
    /// the piece, smallest leading monomial first.
    pub fn from_pieces(ring: &Ring, pieces: Vec<Subspace>, hints: &[Element]) -> Result<Self> {
        let mut generators: Vec<Element> = Vec::new();
        for (d, piece) in pieces.iter().enumerate() {
            let d = d as u32;
            if piece.ambient_dim() != ring.dim(d) {
                return Err(Error::DimensionMismatch {
                    expected: ring.dim(d),
                    found: piece.ambient_dim(),
                });
            }
            let mut span = ideal_piece(ring, &generators, d)?;
            if !piece.contains_subspace(&span) {
                return Err(Error::NotContained(format!(
                    "degree {d} piece is not closed under multiplication"
                )));
            }
            if span.dim() == piece.dim() {
                continue;
            }
            let hinted = hints
                .iter()
                .filter(|h| h.degree() == d && !h.is_zero())
                .map(|h| h.transport(ring))
                .collect::<Result<Vec<_>>>()?;
            let mut fallback: Vec<&BitVec> = piece.basis().iter().collect();
            fallback.sort_by_key(|v| std::cmp::Reverse(v.first_one()));
            let candidates = hinted.into_iter().map(Ok).chain(
                fallback
                    .into_iter()
                    .map(|v| Element::from_coords(ring, v, d)),
            );
            for c in candidates {
                if span.dim() == piece.dim() {
                    break;
                }
                let c = c?;
                let v = c.coords();
                if piece.contains(&v) && !span.contains(&v) {
                    span = span.with([v]);
                    generators.push(c);
                }
            }
        }
        Ok(GradedIdeal {
            ring: ring.clone(),
            pieces,
            generators,
        })
    }

    /// The ideal generated by `gens`, known up to `bound`.
    pub fn generated_by(ring: &Ring, gens: &[Element], bound: u32) -> Result<Self> {
        let pieces = (0..=bound)
            .map(|d| ideal_piece(ring, gens, d))
            .collect::<Result<Vec<_>>>()?;
        Self::from_pieces(ring, pieces, gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn bound(&self) -> u32 {
        self.pieces.len() as u32 - 1
    }

    pub fn piece(&self, d: u32) -> Option<&Subspace> {
        self.pieces.get(d as usize)
    }

    pub fn pieces(&self) -> &[Subspace] {
        &self.pieces
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(Element::render).collect()
    }

    pub fn hilbert(&self) -> Vec<usize> {
        self.pieces.iter().map(Subspace::dim).collect()
    }

    pub fn contains(&self, e: &Element) -> Result<bool> {
        let e = e.transport(&self.ring)?;
        match self.piece(e.degree()) {
            Some(p) => Ok(p.contains(&e.coords())),
            None => Err(Error::BoundExceeded {
                degree: e.degree(),
                bound: self.bound(),
            }),
        }
    }

    /// Per-degree containment `self ⊆ other` over the common range.
    pub fn is_subideal_of(&self, other: &GradedIdeal) -> bool {
        self.pieces
            .iter()
            .zip(&other.pieces)
            .all(|(a, b)| b.contains_subspace(a))
    }

    /// Whether no generator lies in the ideal generated by the others.
    pub fn is_minimal(&self) -> Result<bool> {
        for (i, g) in self.generators.iter().enumerate() {
            let others: Vec<Element> = self
                .generators
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, h)| h.clone())
                .collect();
            if ideal_membership(g, &others)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Spot-checks closure under multiplication by ring generators on
    /// `samples` random ideal elements.
    pub fn spot_check_closure(&self, rng: &mut impl rand::Rng, samples: usize) -> Result<bool> {
        let gens = self.ring.source().generators();
        let nonzero: Vec<u32> = (0..=self.bound())
            .filter(|d| self.pieces[*d as usize].dim() > 0)
            .collect();
        if nonzero.is_empty() || gens.is_empty() {
            return Ok(true);
        }
        for _ in 0..samples {
            let d = nonzero[rng.gen_range(0..nonzero.len())];
            let piece = &self.pieces[d as usize];
            let mut v = BitVec::zeros(piece.ambient_dim());
            for b in piece.basis() {
                if rng.gen_bool(0.5) {
                    v += b;
                }
            }
            let g = &gens[rng.gen_range(0..gens.len())];
            if d + g.degree > self.bound() {
                continue;
            }
            let e = Element::from_coords(&self.ring, &v, d)?;
            let prod = e.multiply(&Element::generator(&self.ring, &g.name)?)?;
            if !self.pieces[(d + g.degree) as usize].contains(&prod.coords()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: u32,
    pub dim_left: usize,
    pub dim_right: usize,
    pub left_in_right: bool,
    pub right_in_left: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealComparison {
    pub equal: bool,
    pub first_failure: Option<u32>,
    pub degrees: Vec<DegreeComparison>,
}

/// Decides `⟨a⟩ = ⟨b⟩` in all degrees up to `bound`, by generator
/// membership in both directions, and reports per-degree dimensions.
pub fn verify_ideal_equality(a: &[Element], b: &[Element], bound: u32) -> Result<IdealComparison> {
    let ring = match a.iter().chain(b).next() {
        Some(e) => e.ring().clone(),
        None => {
            return Ok(IdealComparison {
                equal: true,
                first_failure: None,
                degrees: Vec::new(),
            })
        }
    };
    let a = a
        .iter()
        .map(|e| e.transport(&ring))
        .collect::<Result<Vec<_>>>()?;
    let b = b
        .iter()
        .map(|e| e.transport(&ring))
        .collect::<Result<Vec<_>>>()?;
    let mut degrees = Vec::new();
    let mut first_failure = None;
    for d in 0..=bound {
        let pa = ideal_piece(&ring, &a, d)?;
        let pb = ideal_piece(&ring, &b, d)?;
        let left_in_right = a
            .iter()
            .filter(|g| g.degree() == d)
            .all(|g| pb.contains(&g.coords()))
            && pb.contains_subspace(&pa);
        let right_in_left = b
            .iter()
            .filter(|g| g.degree() == d)
            .all(|g| pa.contains(&g.coords()))
            && pa.contains_subspace(&pb);
        if !(left_in_right && right_in_left) && first_failure.is_none() {
            first_failure = Some(d);
        }
        degrees.push(DegreeComparison {
            degree: d,
            dim_left: pa.dim(),
            dim_right: pb.dim(),
            left_in_right,
            right_in_left,
        });
    }
    Ok(IdealComparison {
        equal: first_failure.is_none(),
        first_failure,
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraPresentation, RewriteSystem};
    use rand::SeedableRng;

    fn borel_so4() -> Ring {
        let t = AlgebraPresentation::free([("t", 1)]).unwrap();
        let p =
            AlgebraPresentation::new([("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"]).unwrap();
        RewriteSystem::normalize(&t.tensor(&p), 14).unwrap()
    }

    #[test]
    fn equality_reflexive() {
        let r = borel_so4();
        let q = Element::parse(&r, "t^3 + u2*t + u3").unwrap();
        let c = verify_ideal_equality(&[q.clone()], &[q], 12).unwrap();
        assert!(c.equal);
        assert_eq!(c.first_failure, None);
    }

    #[test]
    fn different_cubics_differ_in_degree_three() {
        let r = borel_so4();
        let q = Element::parse(&r, "t^3 + u2*t + u3").unwrap();
        let t3 = Element::parse(&r, "t^3").unwrap();
        let c = verify_ideal_equality(&[q], &[t3], 12).unwrap();
        assert!(!c.equal);
        assert_eq!(c.first_failure, Some(3));
    }

    #[test]
    fn generated_ideal_keeps_hinted_generator() {
        let r = borel_so4();
        let q = Element::parse(&r, "t^3 + u2*t + u3").unwrap();
        let tq = q.multiply(&Element::parse(&r, "t").unwrap()).unwrap();
        let ideal = GradedIdeal::generated_by(&r, &[tq, q.clone()], 12).unwrap();
        assert_eq!(ideal.generators(), [q]);
        assert!(ideal.is_minimal().unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        assert!(ideal.spot_check_closure(&mut rng, 50).unwrap());
    }

    #[test]
    fn fallback_prefers_small_leading_monomial() {
        let r = borel_so4();
        let q = Element::parse(&r, "t^3 + u2*t + u3").unwrap();
        let ideal = GradedIdeal::generated_by(&r, &[q.clone()], 10).unwrap();
        let rebuilt = GradedIdeal::from_pieces(&r, ideal.pieces().to_vec(), &[]).unwrap();
        assert_eq!(rebuilt.generators().len(), 1);
        assert_eq!(rebuilt.generators()[0], q);
    }
}
