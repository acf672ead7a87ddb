use f2coh::algebra::{AlgebraPresentation, Element, Generator, Poly, RewriteSystem, Ring};
use f2coh::bundles::gysin_betti;
use f2coh::linalg::{quotient_reps, BitMatrix, BitVec, Subquotient, Subspace};
use f2coh::spectral::{FiberSpec, Page, TransgressionSeed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::{rank, Oracle};

fn bits(len: usize) -> impl Strategy<Value = Vec<bool>> {
    proptest::collection::vec(any::<bool>(), len)
}

fn matrix() -> impl Strategy<Value = Vec<Vec<bool>>> {
    (0usize..24, 0usize..24).prop_flat_map(|(r, c)| proptest::collection::vec(bits(c), r))
}

fn to_matrix(rows: &[Vec<bool>], cols: usize) -> BitMatrix {
    BitMatrix::from_rows(cols, rows.iter().map(|r| BitVec::from_bools(r)).collect())
}

fn vectors(n: usize, len: usize) -> impl Strategy<Value = Vec<BitVec>> {
    proptest::collection::vec(bits(len).prop_map(|b| BitVec::from_bools(&b)), 0..n)
}

/// Generator degrees and, per relation, a degree and a selection of its
/// monomials; resolved against the free ring.
#[derive(Clone, Debug)]
struct RandomPresentation {
    degrees: Vec<u32>,
    relations: Vec<(u32, u64)>,
}

impl RandomPresentation {
    fn build(&self) -> AlgebraPresentation {
        let gens: Vec<Generator> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(i, d)| Generator {
                name: format!("a{i}"),
                degree: *d,
            })
            .collect();
        let free = AlgebraPresentation::from_parts(gens.clone(), Vec::new()).unwrap();
        let free = RewriteSystem::normalize(&free, 8).unwrap();
        let rels = self
            .relations
            .iter()
            .map(|(d, mask)| {
                let basis = free.degree_basis(*d).unwrap();
                Poly::from_monomials(
                    basis
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
                        .map(|(_, m)| m.clone()),
                )
            })
            .filter(|p| !p.is_zero())
            .collect();
        AlgebraPresentation::from_parts(gens, rels).unwrap()
    }
}

fn presentation() -> impl Strategy<Value = RandomPresentation> {
    (
        proptest::collection::vec(1u32..=4, 1..=3),
        proptest::collection::vec((2u32..=8, any::<u64>()), 0..=3),
    )
        .prop_map(|(degrees, relations)| RandomPresentation { degrees, relations })
}

fn random_element(ring: &Ring, d: u32, mask: u64) -> Element {
    let basis = ring.degree_basis(d).unwrap();
    let p = Poly::from_monomials(
        basis
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, m)| m.clone()),
    );
    Element::from_poly_in_degree(ring, &p, d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(rows in matrix(), cols in 0usize..24) {
        let cols = rows.first().map_or(cols, Vec::len);
        let m = to_matrix(&rows, cols);
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.dim(), cols);
        prop_assert_eq!(m.rank(), rank(rows.clone()));
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in kernel.basis() {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn solve_consistent_systems(rows in matrix(), x in bits(24)) {
        let cols = rows.first().map_or(0, Vec::len);
        let m = to_matrix(&rows, cols);
        let x = BitVec::from_bools(&x[..cols]);
        let b = m.mul_vec(&x);
        let y = m.solve(&b).unwrap().expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn quotient_reps_complete_a_basis(sub in vectors(8, 16), extra in vectors(8, 16)) {
        let sub = Subspace::span(16, sub);
        let whole = sub.with(extra);
        let reps = quotient_reps(&sub, &whole).unwrap();
        prop_assert_eq!(reps.len(), whole.dim() - sub.dim());
        prop_assert_eq!(sub.with(reps.clone()).dim(), whole.dim());
        prop_assert_eq!(Subspace::span(16, reps).dim(), whole.dim() - sub.dim());
    }

    #[test]
    fn subquotient_lift_round_trips(b in vectors(6, 16), z in vectors(6, 16), c in bits(16)) {
        let boundaries = Subspace::span(16, b);
        let cycles = boundaries.with(z);
        let sq = Subquotient::new(cycles, boundaries).unwrap();
        let coords = BitVec::from_bools(&c[..sq.dim()]);
        let v = sq.lift(&coords);
        prop_assert!(sq.cycles().contains(&v));
        prop_assert_eq!(sq.coords(&v), Some(coords));
    }

    #[test]
    fn hilbert_series_matches_enumeration(p in presentation()) {
        let p = p.build();
        let ring = RewriteSystem::normalize(&p, 10).unwrap();
        prop_assert_eq!(ring.hilbert_series(10).unwrap(), Oracle::from_presentation(&p).series(10));
    }

    #[test]
    fn reduction_is_confluent(p in presentation(), d in 1u32..=10, mask in any::<u64>(), seed in any::<u64>()) {
        let p = p.build();
        let ring = RewriteSystem::normalize(&p, 10).unwrap();
        let free = RewriteSystem::normalize(&AlgebraPresentation::from_parts(p.generators().to_vec(), Vec::new()).unwrap(), 10).unwrap();
        let poly = random_element(&free, d, mask).poly().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ring.reduce_with(&poly, |n| rand::Rng::gen_range(&mut rng, 0..n)).unwrap();
        prop_assert_eq!(a, ring.reduce(&poly).unwrap());
    }

    #[test]
    fn multiplication_is_commutative_and_associative(
        p in presentation(),
        degs in (1u32..=3, 1u32..=3, 1u32..=3),
        masks in (any::<u64>(), any::<u64>(), any::<u64>()),
    ) {
        let ring = RewriteSystem::normalize(&p.build(), 10).unwrap();
        let a = random_element(&ring, degs.0, masks.0);
        let b = random_element(&ring, degs.1, masks.1);
        let c = random_element(&ring, degs.2, masks.2);
        prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
        prop_assert_eq!(
            a.multiply(&b).unwrap().multiply(&c).unwrap(),
            a.multiply(&b.multiply(&c).unwrap()).unwrap()
        );
        let ab = a.add(&random_element(&ring, degs.0, masks.1)).unwrap();
        prop_assert_eq!(
            ab.multiply(&c).unwrap(),
            a.multiply(&c).unwrap().add(&random_element(&ring, degs.0, masks.1).multiply(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn tensor_series_is_convolution(p in presentation(), q in presentation()) {
        let p = p.build();
        let mut q = q.build();
        let renamed: Vec<Generator> = q
            .generators()
            .iter()
            .map(|g| Generator { name: format!("b{}", &g.name[1..]), degree: g.degree })
            .collect();
        q = AlgebraPresentation::from_parts(renamed, q.relations().to_vec()).unwrap();
        let t = p.tensor(&q);
        let sp = Oracle::from_presentation(&p).series(10);
        let sq = Oracle::from_presentation(&q).series(10);
        let conv: Vec<usize> = (0..=10).map(|n| (0..=n).map(|i| sp[i] * sq[n - i]).sum()).collect();
        let ring = RewriteSystem::normalize(&t, 10).unwrap();
        prop_assert_eq!(ring.hilbert_series(10).unwrap(), conv);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sphere_bundles_agree_with_gysin_and_satisfy_leibniz(
        p in presentation(),
        k in 1u32..=4,
        mask in any::<u64>(),
    ) {
        let bound = 10;
        let base = RewriteSystem::normalize(&p.build(), bound + 1).unwrap();
        let fiber = FiberSpec::sphere(k).unwrap();
        let euler = random_element(&base, k + 1, mask);
        let mut seed = TransgressionSeed::new();
        seed.insert("z", euler.clone());
        let page = Page::run_to_einfty(&base, &fiber, &seed, bound).unwrap();
        prop_assert!(page.is_stable());
        let gysin = gysin_betti(&base, &euler, k, bound).unwrap();
        prop_assert_eq!(page.additive_total(), gysin);
        let mut rng = ChaCha8Rng::seed_from_u64(mask);
        let report = page.leibniz_spot_check(&mut rng, 50).unwrap();
        prop_assert_eq!(report.failures, 0);
    }
}
