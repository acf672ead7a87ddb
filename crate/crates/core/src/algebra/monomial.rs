use std::cmp::Ordering;
use std::collections::BTreeSet;

use smallvec::SmallVec;

/// An exponent vector over the generators of some presentation.
///
/// The ordering is the tie-break of the global monomial order and is only
/// meaningful between monomials of equal degree: `a > b` when, at the first
/// generator where they differ, `a` has the smaller exponent. Together with
/// the grading this is graded reverse lexicographic order in which the last
/// listed generator is the largest variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn degree(&self, weights: &[u32]) -> u32 {
        self.0
            .iter()
            .zip(weights)
            .map(|(e, w)| u32::from(*e) * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`; the caller guarantees `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Embeds into a larger generator list, placing our exponents at `offset`.
    pub(crate) fn embed(&self, nvars: usize, offset: usize) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[offset..offset + self.0.len()].copy_from_slice(&self.0);
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// A polynomial over F2: a set of monomials, added by symmetric difference.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly(BTreeSet<Monomial>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeSet::new())
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.0.insert(m);
        p
    }

    /// Sums the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials(monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Poly::zero();
        for m in monomials {
            p.toggle(m);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.0.contains(m)
    }

    pub fn toggle(&mut self, m: Monomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for m in &other.0 {
            self.toggle(m.clone());
        }
    }

    /// Largest monomial in the global order.
    pub fn leading(&self) -> Option<&Monomial> {
        self.0.last()
    }

    /// Monomials from largest to smallest.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &Monomial> + ExactSizeIterator {
        self.0.iter().rev()
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly(self.0.iter().map(|t| t.mul(m)).collect())
    }

    pub(crate) fn remove(&mut self, m: &Monomial) -> bool {
        self.0.remove(m)
    }

    pub(crate) fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Poly {
        Poly::from_monomials(self.0.iter().map(f))
    }

    /// Degrees of the terms, deduplicated; a homogeneous nonzero polynomial
    /// yields exactly one.
    pub fn degrees(&self, weights: &[u32]) -> BTreeSet<u32> {
        self.0.iter().map(|m| m.degree(weights)).collect()
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.terms()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn order_prefers_small_first_exponent() {
        // u3^2 beats u2^3 with generators (u2, u3)
        assert!(mono(&[0, 2]) > mono(&[3, 0]));
        assert!(mono(&[0, 1]) > mono(&[1, 0]));
    }

    #[test]
    fn order_is_multiplicative() {
        let a = mono(&[0, 2, 1]);
        let b = mono(&[1, 0, 2]);
        let c = mono(&[2, 1, 1]);
        assert_eq!(a.cmp(&b), a.mul(&c).cmp(&b.mul(&c)));
    }

    #[test]
    fn poly_addition_cancels() {
        let mut p = Poly::from_monomials([mono(&[1, 0]), mono(&[0, 1])]);
        p.add_assign(&Poly::monomial(mono(&[1, 0])));
        assert_eq!(p, Poly::monomial(mono(&[0, 1])));
        assert_eq!(p.leading(), Some(&mono(&[0, 1])));
    }

    #[test]
    fn divisibility() {
        let a = mono(&[1, 2]);
        let b = mono(&[2, 2]);
        assert!(a.divides(&b));
        assert_eq!(b.div(&a), mono(&[1, 0]));
        assert_eq!(a.lcm(&mono(&[0, 3])), mono(&[1, 3]));
        assert!(mono(&[1, 0]).coprime(&mono(&[0, 4])));
    }
}
