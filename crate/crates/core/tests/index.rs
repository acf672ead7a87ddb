use f2coh::algebra::{AlgebraMorphism, AlgebraPresentation, Element};
use f2coh::bundles::{EquivariantBundleSpec, GroupAction};
use f2coh::index::{check_monotonicity, fh_index, fh_index_computation, verify_ideal_equality};
use f2coh::spectral::FiberSpec;

fn so4() -> AlgebraPresentation {
    AlgebraPresentation::new([("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"]).unwrap()
}

fn u2pm() -> AlgebraPresentation {
    AlgebraPresentation::new([("x", 6), ("y", 2)], &["x^2", "y^3"]).unwrap()
}

fn phi(n: usize) -> EquivariantBundleSpec {
    let mut actions = vec![GroupAction::Conjugation];
    actions.extend((0..n).map(GroupAction::Antipodal));
    EquivariantBundleSpec::new(u2pm(), FiberSpec::spheres(&vec![3; n]).unwrap())
        .with_sw(&["1", "y", "y^2"])
        .with_group(actions)
}

#[test]
fn rho1_index() {
    let spec = EquivariantBundleSpec::new(so4(), FiberSpec::sphere(2).unwrap())
        .with_sw(&["1", "u2", "u3"])
        .with_group(vec![GroupAction::Antipodal(0)]);
    let comp = fh_index_computation(&spec, 12).unwrap();
    let q = Element::parse(comp.ideal.ring(), "t^3 + u2*t + u3").unwrap();
    assert_eq!(comp.ideal.generators(), std::slice::from_ref(&q));
    assert!(
        verify_ideal_equality(comp.ideal.generators(), &[q], 12)
            .unwrap()
            .equal
    );
}

#[test]
fn free_sphere_index() {
    let spec = EquivariantBundleSpec::new(
        AlgebraPresentation::trivial(),
        FiberSpec::sphere(2).unwrap(),
    )
    .with_group(vec![GroupAction::Antipodal(0)]);
    assert_eq!(
        fh_index(&spec, 10).unwrap().generator_strings(),
        vec!["t^3".to_string()]
    );
}

#[test]
fn phi_indexes() {
    for n in 1..=3 {
        let t = std::time::Instant::now();
        let ideal = fh_index(&phi(n), 10).unwrap();
        let expected: Vec<Element> = (2..=n + 1)
            .map(|k| Element::parse(ideal.ring(), &format!("y^2 + y*t{k}^2 + t{k}^4")).unwrap())
            .collect();
        let cmp = verify_ideal_equality(ideal.generators(), &expected, 10).unwrap();
        assert!(cmp.equal, "n = {n}: {:?}", ideal.generator_strings());
        println!(
            "n = {n}: {:?} in {:?}",
            ideal.generator_strings(),
            t.elapsed()
        );
    }
    let small = fh_index(&phi(1), 10).unwrap();
    let large = fh_index(&phi(2), 10).unwrap();
    for k in 2..=3 {
        let tk = format!("t{k}");
        let f = AlgebraMorphism::from_strings(
            small.ring(),
            large.ring(),
            &[("t1", "t1"), ("t2", tk.as_str()), ("x", "x"), ("y", "y")],
        )
        .unwrap();
        assert!(check_monotonicity(&small, &large, &f).unwrap().holds);
    }
}
