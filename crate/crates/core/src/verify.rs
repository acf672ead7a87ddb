//! The regression suite behind `f2coh verify`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    find_isomorphism, AlgebraMorphism, AlgebraPresentation, Element, Poly, RewriteSystem, Ring,
};
use crate::bundles::{
    assemble_equivariant_seeds, euler_transgression, gysin_betti, EquivariantBundleSpec,
};
use crate::catalog::{self, bundle, poincare_duality, space};
use crate::error::Result;
use crate::index::{check_monotonicity, fh_index, fh_index_computation, verify_ideal_equality};
use crate::spectral::{reconstruct_ring, Page, TransgressionSeed};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub family: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

struct Check {
    id: u32,
    family: &'static str,
    name: &'static str,
    run: fn(Option<u32>) -> Result<(bool, String)>,
}

const CHECKS: [Check; 8] = [
    Check {
        id: 1,
        family: "catalog",
        name: "catalog Hilbert series",
        run: catalog_series,
    },
    Check {
        id: 2,
        family: "spectral",
        name: "G2_SO4 with S^2 fiber and z -> u3 gives F2[x,y]/(x^2,y^3)",
        run: so4_sphere_bundle_ring,
    },
    Check {
        id: 3,
        family: "gysin",
        name: "Gysin sequence agrees with the spectral sequence",
        run: gysin_cross_check,
    },
    Check {
        id: 4,
        family: "index",
        name: "index of rho1 and rho2 is (t^3 + u2*t + u3)",
        run: rho_index,
    },
    Check {
        id: 5,
        family: "spectral",
        name: "zeta_2 additive table and representatives",
        run: zeta2_table,
    },
    Check {
        id: 6,
        family: "index",
        name: "index of phi_n for n = 1, 2, 3 and monotonicity",
        run: phi_index,
    },
    Check {
        id: 7,
        family: "index",
        name: "Borel cohomology of the zeta_2 total space",
        run: borel_total,
    },
    Check {
        id: 8,
        family: "properties",
        name: "d^2 = 0, bookkeeping, Leibniz, confluence, duality",
        run: properties,
    },
];

pub fn families() -> Vec<&'static str> {
    let mut f: Vec<&'static str> = CHECKS.iter().map(|c| c.family).collect();
    f.dedup();
    f.sort_unstable();
    f.dedup();
    f
}

/// Whether `subset` selects check `id`: a family name, a check number, or
/// `all`.
fn selected(subset: Option<&str>, id: u32, family: &str) -> bool {
    match subset {
        None | Some("all") => true,
        Some(s) => s.split(',').any(|s| s == family || s.parse() == Ok(id)),
    }
}

/// Runs the selected checks concurrently and reports them in order.
pub fn run(subset: Option<&str>, bound: Option<u32>) -> Vec<CheckResult> {
    CHECKS
        .par_iter()
        .filter(|c| selected(subset, c.id, c.family))
        .map(|c| {
            let start = Instant::now();
            let (passed, detail) = match (c.run)(bound) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult {
                id: c.id,
                family: c.family,
                name: c.name,
                passed,
                detail,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect()
}

fn normalized(name: &str, bound: u32) -> Result<Ring> {
    RewriteSystem::normalize(&space(name)?.presentation, bound)
}

fn convolve(a: &[usize], b: &[usize], len: usize) -> Vec<usize> {
    (0..len)
        .map(|n| {
            (0..=n)
                .map(|i| a.get(i).unwrap_or(&0) * b.get(n - i).unwrap_or(&0))
                .sum()
        })
        .collect()
}

fn even_ones(top: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|d| usize::from(d <= top && d % 2 == 0))
        .collect()
}

fn catalog_series(_: Option<u32>) -> Result<(bool, String)> {
    let so4 = normalized("G2_SO4", 8)?.hilbert_series(8)?;
    let u2 = normalized("G2_U2pm", 12)?.hilbert_series(12)?;
    let t2 = normalized("G2_T2", 14)?.hilbert_series(14)?;
    let ok1 = so4 == [1, 0, 1, 1, 1, 1, 1, 0, 1];
    let ok2 = u2 == even_ones(10, 13);
    let ok3 = t2 == convolve(&u2, &[1, 0, 1], 15);
    Ok((
        ok1 && ok2 && ok3,
        format!("G2_SO4 {so4:?}, G2_U2pm {u2:?}, G2_T2 {t2:?}"),
    ))
}

fn so4_sphere_bundle_ring(bound: Option<u32>) -> Result<(bool, String)> {
    let bound = bound.unwrap_or(20).max(20);
    let base = normalized("G2_SO4", bound)?;
    let fiber = crate::spectral::FiberSpec::sphere(2)?;
    let seed = TransgressionSeed::from_strings(&base, &fiber, &[("z", "u3")])?;
    let page = Page::run_to_einfty(&base, &fiber, &seed, bound)?;
    let totals = page.additive_total();
    let expected = normalized("G2_U2pm", bound)?;
    let additive = totals == expected.hilbert_series(bound)?;
    let rec = reconstruct_ring(&page)?;
    let iso = match rec.presentation() {
        Some(p) if rec.is_determined() => {
            let got = RewriteSystem::normalize(p, bound)?;
            find_isomorphism(&got, &expected, bound, 100_000)?.is_some()
        }
        _ => false,
    };
    let shown = rec
        .presentation()
        .map_or("additive only".to_string(), |p| p.to_string());
    Ok((
        additive && iso && page.r() == 4,
        format!(
            "stable at E_{}, totals {:?}, ring {shown}",
            page.r(),
            totals
        ),
    ))
}

fn gysin_cross_check(bound: Option<u32>) -> Result<(bool, String)> {
    let bound = bound.unwrap_or(14);
    let mut lines = Vec::new();
    let mut ok = true;
    let mut entries: Vec<_> = ["rho1", "rho2", "rho4", "rho5", "zeta_1"]
        .iter()
        .map(|n| bundle(n, None, None))
        .collect::<Result<_>>()?;
    entries.push(bundle("free-sphere", None, Some(3))?);
    for e in entries {
        let spec = e.spec.non_equivariant();
        let assembled = assemble_equivariant_seeds(&spec, bound + 1)?;
        let sw = spec.sw_class(&assembled.ring, 0)?;
        let euler = euler_transgression(&sw);
        let gysin = gysin_betti(&assembled.ring, &euler, spec.sphere_dims()[0], bound)?;
        let page = Page::run_to_einfty(&assembled.ring, &assembled.fiber, &assembled.seed, bound)?;
        let ss = page.additive_total();
        let mut agree = gysin == ss;
        if let Some(total) = &e.total_space {
            let series = normalized(total, bound)?.hilbert_series(bound)?;
            agree &= series == ss;
        }
        ok &= agree;
        lines.push(format!(
            "{} {}",
            e.name,
            if agree { "agrees" } else { "DIFFERS" }
        ));
    }
    Ok((ok, lines.join(", ")))
}

fn rho_index(bound: Option<u32>) -> Result<(bool, String)> {
    let bound = bound.unwrap_or(12).max(12);
    let mut ok = true;
    let mut lines = Vec::new();
    for name in ["rho1", "rho2"] {
        let spec = bundle(name, None, None)?.spec;
        let comp = fh_index_computation(&spec, bound)?;
        let ring = comp.ideal.ring();
        let q = Element::parse(ring, "t^3 + u2*t + u3")?;
        let eq = verify_ideal_equality(comp.ideal.generators(), &[q], bound)?;
        let quotient = ring.source().quotient(&["t^3 + u2*t + u3"])?;
        let qseries = RewriteSystem::normalize(&quotient, bound)?.hilbert_series(bound)?;
        let bottom = comp.bottom_row() == qseries;
        ok &= eq.equal && bottom;
        lines.push(format!(
            "{name}: {:?} equal={} bottom row matches quotient={bottom}",
            comp.ideal.generator_strings(),
            eq.equal
        ));
    }
    Ok((ok, lines.join("; ")))
}

/// The representatives listed per degree for `zeta_2`.
pub const ZETA2_TABLE: [(u32, &[&str]); 13] = [
    (0, &["1"]),
    (2, &["y"]),
    (3, &["z1 + z2"]),
    (5, &["y*z1", "y*z2"]),
    (6, &["x"]),
    (7, &["y^2*z1"]),
    (8, &["x*y", "y*z1*z2"]),
    (9, &["x*z1 + x*z2"]),
    (10, &["y^2*z1*z2"]),
    (11, &["x*y*z1", "x*y*z2"]),
    (13, &["x*y^2*z1"]),
    (14, &["x*y*z1*z2"]),
    (16, &["x*y^2*z1*z2"]),
];

fn zeta2_table(bound: Option<u32>) -> Result<(bool, String)> {
    let bound = bound.unwrap_or(16).max(16);
    let spec = bundle("zeta_2", None, None)?.spec;
    let a = assemble_equivariant_seeds(&spec, bound)?;
    let page = Page::run_to_einfty(&a.ring, &a.fiber, &a.seed, bound)?;
    let totals = page.additive_total();
    let additive = totals[..17] == [1, 0, 1, 1, 0, 2, 1, 1, 2, 1, 1, 2, 0, 1, 1, 0, 1];
    let mut labels = true;
    for n in 0..=16u32 {
        let listed: &[&str] = ZETA2_TABLE
            .iter()
            .find(|(d, _)| *d == n)
            .map_or(&[], |(_, l)| *l);
        let elements = listed
            .iter()
            .map(|s| Element::parse_in_degree(page.e2_ring(), s, n))
            .collect::<Result<Vec<_>>>()?;
        labels &= elements.len() == totals[n as usize] && page.spans_degree(n, &elements)?;
    }
    Ok((
        additive && labels,
        format!(
            "totals {:?}, representatives match: {labels}",
            &totals[..17]
        ),
    ))
}

fn phi_expected(ring: &Ring, n: usize) -> Result<Vec<Element>> {
    (2..=n + 1)
        .map(|k| Element::parse(ring, &format!("y^2 + y*t{k}^2 + t{k}^4")))
        .collect()
}

fn phi_index(bound: Option<u32>) -> Result<(bool, String)> {
    let bound = bound.unwrap_or(10).max(10);
    let mut ok = true;
    let mut lines = Vec::new();
    let small = fh_index(&bundle("phi_1", None, None)?.spec, bound)?;
    for n in 1..=3 {
        let ideal = fh_index(&bundle("phi_n", Some(n), None)?.spec, bound)?;
        let eq = verify_ideal_equality(ideal.generators(), &phi_expected(ideal.ring(), n)?, bound)?;
        let mut mono = true;
        for k in 2..=n + 1 {
            let tk = format!("t{k}");
            let f = AlgebraMorphism::from_strings(
                small.ring(),
                ideal.ring(),
                &[("t1", "t1"), ("t2", &tk), ("x", "x"), ("y", "y")],
            )?;
            mono &= check_monotonicity(&small, &ideal, &f)?.holds;
        }
        ok &= eq.equal && mono;
        lines.push(format!("n={n}: equal={} monotone={mono}", eq.equal));
    }
    Ok((ok, lines.join(", ")))
}

fn borel_total(bound: Option<u32>) -> Result<(bool, String)> {
    let bound = bound.unwrap_or(16).max(16);
    let spec = bundle("phi_2", None, None)?.spec;
    let a = assemble_equivariant_seeds(&spec, bound)?;
    let page = Page::run_to_einfty(&a.ring, &a.fiber, &a.seed, bound)?;
    let totals = page.additive_total();
    let quotient = a
        .ring
        .source()
        .quotient(&["y^2 + y*t2^2 + t2^4", "y^2 + y*t3^2 + t3^4"])?;
    let expected = RewriteSystem::normalize(&quotient, bound)?.hilbert_series(bound)?;
    Ok((
        totals == expected,
        format!("engine {totals:?}, quotient {expected:?}"),
    ))
}

/// Specs of every run whose pages the property check inspects.
fn property_runs() -> Result<Vec<(String, EquivariantBundleSpec, u32)>> {
    let mut runs = Vec::new();
    for e in catalog::bundles() {
        if matches!(e.transgression, catalog::Transgression::Undetermined(_)) {
            continue;
        }
        runs.push((e.name.clone(), e.spec.non_equivariant(), 14));
        if e.spec.group.rank > 0 {
            runs.push((format!("{} (Borel)", e.name), e.spec.clone(), 12));
        }
    }
    Ok(runs)
}

fn random_poly(free: &Ring, d: u32, rng: &mut ChaCha8Rng) -> Result<Poly> {
    let basis = free.degree_basis(d)?;
    Ok(Poly::from_monomials(
        basis.iter().filter(|_| rng.gen_bool(0.5)).cloned(),
    ))
}

/// Reduces random polynomials with randomly chosen rewriting steps and
/// compares with the canonical normal form.
pub fn confluence_trials(
    p: &AlgebraPresentation,
    bound: u32,
    trials: usize,
    seed: u64,
) -> Result<usize> {
    let ring = RewriteSystem::normalize(p, bound)?;
    let free = RewriteSystem::normalize(
        &AlgebraPresentation::from_parts(p.generators().to_vec(), Vec::new())?,
        bound,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degrees: Vec<u32> = (1..=bound).filter(|d| free.dim(*d) > 0).collect();
    let mut failures = 0;
    for _ in 0..trials {
        if degrees.is_empty() {
            break;
        }
        let d = degrees[rng.gen_range(0..degrees.len())];
        let poly = random_poly(&free, d, &mut rng)?;
        let mut picker = ChaCha8Rng::seed_from_u64(rng.gen());
        let a = ring.reduce_with(&poly, |n| picker.gen_range(0..n))?;
        if a != ring.reduce(&poly)? {
            failures += 1;
        }
    }
    Ok(failures)
}

fn properties(_: Option<u32>) -> Result<(bool, String)> {
    let mut problems = Vec::new();
    let mut pages = 0;
    let mut leibniz = 0;
    for (name, spec, bound) in property_runs()? {
        let a = assemble_equivariant_seeds(&spec, bound)?;
        // every turn checks d∘d = 0 and the dimension count, failing hard
        let page = match Page::run_to_einfty(&a.ring, &a.fiber, &a.seed, bound) {
            Ok(p) => p,
            Err(e) => {
                problems.push(format!("{name}: {e}"));
                continue;
            }
        };
        pages += page.history().len();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let report = page.leibniz_spot_check(&mut rng, 100)?;
        leibniz += report.checked;
        if report.failures > 0 {
            problems.push(format!("{name}: {} Leibniz failures", report.failures));
        }
        if !page.edge_check() {
            problems.push(format!("{name}: bottom row exceeds the base"));
        }
    }
    let mut confluence = 0;
    for s in catalog::spaces() {
        let bound = s
            .manifold_dim
            .unwrap_or(12)
            .max(s.presentation.max_relation_degree())
            + 4;
        let failures = confluence_trials(&s.presentation, bound, 100, 11)?;
        confluence += 100;
        if failures > 0 {
            problems.push(format!("{}: {failures} confluence failures", s.name));
        }
    }
    for name in ["G2_SO4", "G2_U2pm", "G2_T2"] {
        let s = space(name)?;
        let dim = s.manifold_dim.unwrap_or(0);
        if !poincare_duality(&s.presentation, dim)?.holds() {
            problems.push(format!("{name}: Poincaré duality fails"));
        }
    }
    let detail = format!(
        "{pages} page turns checked, {leibniz} Leibniz samples, {confluence} confluence trials{}",
        if problems.is_empty() {
            String::new()
        } else {
            format!("; {}", problems.join("; "))
        }
    );
    Ok((problems.is_empty(), detail))
}
