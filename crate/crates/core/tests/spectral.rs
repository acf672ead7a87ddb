use f2coh::algebra::{find_isomorphism, AlgebraPresentation, RewriteSystem, Ring};
use f2coh::spectral::{reconstruct_ring, FiberSpec, Page, RingReconstruction, TransgressionSeed};

fn ring(gens: &[(&str, u32)], rels: &[&str], bound: u32) -> Ring {
    let p = AlgebraPresentation::new(gens.iter().map(|(n, d)| (*n, *d)), rels).unwrap();
    RewriteSystem::normalize(&p, bound).unwrap()
}

fn g2_so4(bound: u32) -> Ring {
    ring(&[("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"], bound)
}

fn g2_u2(bound: u32) -> Ring {
    ring(&[("y", 2), ("x", 6)], &["x^2", "y^3"], bound)
}

fn s6(bound: u32) -> Ring {
    ring(&[("x", 6)], &["x^2"], bound)
}

#[test]
fn point_base_sphere_fiber() {
    let pt = ring(&[], &[], 6);
    let page = Page::run_to_einfty(
        &pt,
        &FiberSpec::sphere(3).unwrap(),
        &TransgressionSeed::new(),
        6,
    )
    .unwrap();
    assert!(page.is_stable());
    assert_eq!(page.additive_total(), vec![1, 0, 0, 1, 0, 0, 0]);
    assert_eq!(
        page.dims().keys().copied().collect::<Vec<_>>(),
        vec![(0, 0), (0, 3)]
    );
}

#[test]
fn s6_cp2_collapses() {
    let base = s6(20);
    let page = Page::run_to_einfty(
        &base,
        &FiberSpec::cp(2).unwrap(),
        &TransgressionSeed::new(),
        20,
    )
    .unwrap();
    assert_eq!(page.r(), 2);
    assert_eq!(page.dims().len(), 6);
    assert!(page.dims().values().all(|d| *d == 1));
    let t = page.additive_total();
    assert_eq!(&t[..11], &[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
    let rec = reconstruct_ring(&page).unwrap();
    let expected = g2_u2(20);
    let got = RewriteSystem::normalize(rec.presentation().unwrap(), 20).unwrap();
    assert!(find_isomorphism(&got, &expected, 20, 10_000)
        .unwrap()
        .is_some());
    match rec {
        RingReconstruction::Presented {
            open_extensions, ..
        } => {
            assert!(open_extensions.iter().any(|e| e.degree == 6));
        }
        _ => unreachable!(),
    }
}

#[test]
fn so4_sphere_bundle_ring() {
    let base = g2_so4(20);
    let fiber = FiberSpec::sphere(2).unwrap();
    let seed = TransgressionSeed::from_strings(&base, &fiber, &[("z", "u3")]).unwrap();
    let page = Page::run_to_einfty(&base, &fiber, &seed, 20).unwrap();
    assert_eq!(page.r(), 4);
    let t = page.additive_total();
    let mut want = vec![0; 21];
    for d in (0..=10).step_by(2) {
        want[d] = 1;
    }
    assert_eq!(t, want);
    let rec = reconstruct_ring(&page).unwrap();
    assert!(rec.is_determined(), "{rec:?}");
    let got = RewriteSystem::normalize(rec.presentation().unwrap(), 20).unwrap();
    assert!(find_isomorphism(&got, &g2_u2(20), 20, 10_000)
        .unwrap()
        .is_some());
}

#[test]
fn zeta_2_table() {
    let base = g2_u2(16);
    let fiber = FiberSpec::spheres(&[3, 3]).unwrap();
    let seed =
        TransgressionSeed::from_strings(&base, &fiber, &[("z1", "y^2"), ("z2", "y^2")]).unwrap();
    let e2 = Page::build_e2(&base, &fiber, 16).unwrap();
    assert_eq!(e2.additive_total().iter().sum::<usize>(), 24);
    let page = Page::run_to_einfty(&base, &fiber, &seed, 16).unwrap();
    assert_eq!(
        page.additive_total(),
        vec![1, 0, 1, 1, 0, 2, 1, 1, 2, 1, 1, 2, 0, 1, 1, 0, 1]
    );
    println!("{}", page.text_grid());
}
