use super::element::Element;
use super::monomial::{Monomial, Poly};
use super::rewrite::Ring;
use crate::error::{Error, Result};
use crate::index::GradedIdeal;
use crate::linalg::{BitMatrix, BitVec, Subspace};

/// A grading-preserving algebra map, given by the images of the source
/// generators.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: Ring,
    target: Ring,
    images: Vec<Element>,
}

impl AlgebraMorphism {
    /// Checks degrees and that every source relation within the target's
    /// bound maps to zero.
    pub fn new(source: &Ring, target: &Ring, images: Vec<Element>) -> Result<Self> {
        let gens = source.source().generators();
        if images.len() != gens.len() {
            return Err(Error::DimensionMismatch {
                expected: gens.len(),
                found: images.len(),
            });
        }
        for (g, img) in gens.iter().zip(&images) {
            if !img.is_zero() && img.degree() != g.degree {
                return Err(Error::DegreeMismatch(format!(
                    "{} has degree {} but its image {} has degree {}",
                    g.name,
                    g.degree,
                    img,
                    img.degree()
                )));
            }
        }
        let images = gens
            .iter()
            .zip(images)
            .map(|(g, img)| {
                if img.is_zero() {
                    Ok(Element::zero(target, g.degree))
                } else {
                    img.transport(target)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let f = AlgebraMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for r in source.source().relations() {
            let d = source.source().poly_degree(r).unwrap_or(0);
            if d > target.bound() {
                continue;
            }
            let img = f.apply_poly(r, d)?;
            if !img.is_zero() {
                return Err(Error::IllDefinedMorphism {
                    relation: source.source().render(r),
                    image: img.render(),
                });
            }
        }
        Ok(f)
    }

    /// Images given as `(generator, polynomial)` strings; unlisted
    /// generators map to zero.
    pub fn from_strings(source: &Ring, target: &Ring, images: &[(&str, &str)]) -> Result<Self> {
        for (name, _) in images {
            if source.source().generator_index(name).is_none() {
                return Err(Error::UnknownGenerator(name.to_string()));
            }
        }
        let imgs = source
            .source()
            .generators()
            .iter()
            .map(|g| match images.iter().find(|(n, _)| *n == g.name) {
                Some((_, s)) => Element::parse_in_degree(target, s, g.degree),
                None => Ok(Element::zero(target, g.degree)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, imgs)
    }

    pub fn identity(ring: &Ring) -> Self {
        let images = ring
            .source()
            .generators()
            .iter()
            .map(|g| Element::generator(ring, &g.name).expect("own generator"))
            .collect();
        AlgebraMorphism {
            source: ring.clone(),
            target: ring.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Largest degree in which the morphism is fully determined.
    pub fn bound(&self) -> u32 {
        self.source.bound().min(self.target.bound())
    }

    fn apply_monomial(&self, m: &Monomial) -> Result<Element> {
        let mut acc = Element::one(&self.target);
        for (img, e) in self.images.iter().zip(m.exponents()) {
            for _ in 0..*e {
                acc = acc.multiply(img)?;
            }
        }
        Ok(acc)
    }

    fn apply_poly(&self, p: &Poly, degree: u32) -> Result<Element> {
        let mut acc = Element::zero(&self.target, degree);
        for m in p.terms() {
            acc = acc.add(&self.apply_monomial(m)?)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, e: &Element) -> Result<Element> {
        let e = e.transport(&self.source)?;
        self.apply_poly(e.poly(), e.degree())
    }

    /// Matrix of the degree-`d` component, columns indexed by the source
    /// degree basis.
    pub fn matrix(&self, d: u32) -> Result<BitMatrix> {
        let cols = self
            .source
            .degree_basis(d)?
            .iter()
            .map(|m| Ok(self.apply_monomial(m)?.coords()))
            .collect::<Result<Vec<BitVec>>>()?;
        Ok(BitMatrix::from_columns(self.target.dim(d), &cols))
    }

    pub fn kernel_piece(&self, d: u32) -> Result<Subspace> {
        Ok(self.matrix(d)?.kernel_basis())
    }

    /// Whether every degree component up to `bound` is bijective.
    pub fn is_isomorphism(&self, bound: u32) -> Result<bool> {
        for d in 0..=bound {
            if self.source.dim(d) != self.target.dim(d) {
                return Ok(false);
            }
            if self.matrix(d)?.rank() != self.source.dim(d) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The graded kernel ideal of `f` in degrees up to `bound`.
pub fn morphism_kernel(f: &AlgebraMorphism, bound: u32) -> Result<GradedIdeal> {
    if bound > f.bound() {
        return Err(Error::BoundExceeded {
            degree: bound,
            bound: f.bound(),
        });
    }
    let pieces = (0..=bound)
        .map(|d| f.kernel_piece(d))
        .collect::<Result<Vec<_>>>()?;
    GradedIdeal::from_pieces(f.source(), pieces, &[])
}

/// Searches for a graded isomorphism `a → b` valid up to `bound` by trying
/// every assignment of nonzero generator images. Gives up (returning
/// `Ok(None)`) when more than `limit` assignments would be needed.
pub fn find_isomorphism(
    a: &Ring,
    b: &Ring,
    bound: u32,
    limit: u64,
) -> Result<Option<AlgebraMorphism>> {
    if a.hilbert_series(bound)? != b.hilbert_series(bound)? {
        return Ok(None);
    }
    let gens = a.source().generators();
    let mut choices: Vec<Vec<Element>> = Vec::new();
    let mut total: u64 = 1;
    for g in gens {
        if g.degree > b.bound() {
            return Ok(None);
        }
        let dim = b.dim(g.degree);
        if dim >= 32 {
            return Ok(None);
        }
        let count = (1u64 << dim) - 1;
        total = total.saturating_mul(count.max(1));
        if total > limit {
            return Ok(None);
        }
        let mut opts = Vec::new();
        for bits in 1..=count {
            let v = BitVec::from_bools(&(0..dim).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>());
            opts.push(Element::from_coords(b, &v, g.degree)?);
        }
        if opts.is_empty() {
            opts.push(Element::zero(b, g.degree));
        }
        choices.push(opts);
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        let images: Vec<Element> = idx
            .iter()
            .zip(&choices)
            .map(|(i, c)| c[*i].clone())
            .collect();
        if let Ok(f) = AlgebraMorphism::new(a, b, images) {
            if f.is_isomorphism(bound)? {
                return Ok(Some(f));
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(None);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraPresentation, RewriteSystem};

    fn so4() -> Ring {
        let p =
            AlgebraPresentation::new([("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"]).unwrap();
        RewriteSystem::normalize(&p, 12).unwrap()
    }

    fn u2m() -> Ring {
        let p = AlgebraPresentation::new([("x", 6), ("y", 2)], &["x^2", "y^3"]).unwrap();
        RewriteSystem::normalize(&p, 12).unwrap()
    }

    #[test]
    fn identity_has_zero_kernel() {
        let r = so4();
        let k = morphism_kernel(&AlgebraMorphism::identity(&r), 12).unwrap();
        assert!(k.hilbert().iter().all(|d| *d == 0));
        assert!(k.generators().is_empty());
    }

    #[test]
    fn rho2_pullback_kernel_contains_u3() {
        let f = AlgebraMorphism::from_strings(&so4(), &u2m(), &[("u2", "y"), ("u3", "0")]).unwrap();
        let k = morphism_kernel(&f, 12).unwrap();
        let u3 = Element::parse(f.source(), "u3").unwrap();
        assert!(k.contains(&u3).unwrap());
        assert_eq!(
            f.apply(&Element::parse(f.source(), "u2^2").unwrap())
                .unwrap()
                .render(),
            "y^2"
        );
    }

    #[test]
    fn zero_target_kernel_is_augmentation_ideal() {
        let r = so4();
        let point = RewriteSystem::normalize(&AlgebraPresentation::trivial(), 12).unwrap();
        let f = AlgebraMorphism::from_strings(&r, &point, &[]).unwrap();
        let k = morphism_kernel(&f, 12).unwrap();
        let h = r.hilbert_series(12).unwrap();
        assert_eq!(k.hilbert()[0], 0);
        assert_eq!(k.hilbert()[1..], h[1..]);
    }

    #[test]
    fn ill_defined_morphism_rejected() {
        let err = AlgebraMorphism::from_strings(&so4(), &u2m(), &[("u2", "y"), ("u3", "0")])
            .map(|_| ())
            .and_then(|_| {
                AlgebraMorphism::from_strings(&u2m(), &so4(), &[("y", "u2"), ("x", "0")])
                    .map(|_| ())
            });
        assert!(matches!(err, Err(Error::IllDefinedMorphism { .. })));
    }

    #[test]
    fn finds_relabelling_isomorphism() {
        let a = u2m();
        let p = AlgebraPresentation::new([("b", 2), ("a", 6)], &["a^2", "b^3"]).unwrap();
        let b = RewriteSystem::normalize(&p, 12).unwrap();
        let f = find_isomorphism(&a, &b, 12, 1000).unwrap().unwrap();
        assert!(f.is_isomorphism(12).unwrap());
        assert!(find_isomorphism(&a, &so4(), 12, 1000).unwrap().is_none());
    }
}
