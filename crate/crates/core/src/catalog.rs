//! Built-in spaces and bundles.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPresentation, Element, RewriteSystem, Ring};
use crate::bundles::{EquivariantBundleSpec, GroupAction, GroupSpec};
use crate::error::{Error, Result};
use crate::linalg::BitMatrix;
use crate::spectral::FiberSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpaceEntry {
    pub name: String,
    pub presentation: AlgebraPresentation,
    /// Dimension of the closed manifold, if it is one.
    pub manifold_dim: Option<u32>,
    pub description: String,
}

const FIXED_SPACES: [&str; 5] = ["point", "G2_SO4", "G2_U2pm", "G2_T2", "S6"];
const PARAM_SPACES: [&str; 3] = ["Sphere(k)", "CP(m)", "BZ2^m"];

fn pres(gens: &[(&str, u32)], rels: &[&str]) -> AlgebraPresentation {
    AlgebraPresentation::new(gens.iter().copied(), rels).expect("catalog presentation")
}

fn entry(
    name: &str,
    presentation: AlgebraPresentation,
    dim: Option<u32>,
    description: &str,
) -> SpaceEntry {
    SpaceEntry {
        name: name.to_string(),
        presentation,
        manifold_dim: dim,
        description: description.to_string(),
    }
}

fn unknown(kind: &'static str, name: &str, valid: &[&str]) -> Error {
    Error::UnknownName {
        kind,
        name: name.to_string(),
        valid: valid.join(", "),
    }
}

fn parse_param(name: &str, prefix: &str, suffix: &str) -> Option<u32> {
    name.strip_prefix(prefix)?
        .strip_suffix(suffix)?
        .parse()
        .ok()
}

/// Looks up a space. `Sphere(k)`, `CP(m)` and `BZ2^m` take a parameter.
pub fn space(name: &str) -> Result<SpaceEntry> {
    let e = match name {
        "point" => entry("point", AlgebraPresentation::trivial(), Some(0), "a point"),
        "G2_SO4" => entry(
            name,
            pres(&[("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"]),
            Some(8),
            "G2/SO(4), quaternionic subalgebras of the octonions",
        ),
        "G2_U2pm" => entry(
            name,
            pres(&[("x", 6), ("y", 2)], &["x^2", "y^3"]),
            Some(10),
            "G2/U(2)+ and G2/U(2)-, which have the same mod 2 cohomology",
        ),
        "G2_T2" => entry(
            name,
            pres(&[("x", 6), ("y", 2), ("z", 2)], &["x^2", "y^3", "z^2"]),
            Some(12),
            "G2/U(1)xU(1), the full flag manifold",
        ),
        "S6" => entry(name, pres(&[("x", 6)], &["x^2"]), Some(6), "the 6-sphere"),
        _ => {
            if let Some(k) = parse_param(name, "Sphere(", ")") {
                if k == 0 {
                    return Err(Error::InvalidSpec("Sphere(0) is not supported".into()));
                }
                entry(name, pres(&[("s", k)], &["s^2"]), Some(k), "a sphere")
            } else if let Some(m) = parse_param(name, "CP(", ")") {
                if m == 0 {
                    return space("point");
                }
                let rel = format!("c^{}", m + 1);
                entry(
                    name,
                    pres(&[("c", 2)], &[rel.as_str()]),
                    Some(2 * m),
                    "complex projective space",
                )
            } else if let Some(m) = name
                .strip_prefix("BZ2^")
                .and_then(|m| m.parse::<u32>().ok())
            {
                let p = crate::bundles::borel_base(m, &AlgebraPresentation::trivial())?;
                entry(
                    name,
                    p,
                    if m == 0 { Some(0) } else { None },
                    "classifying space of (Z/2)^m",
                )
            } else {
                let mut valid = FIXED_SPACES.to_vec();
                valid.extend(PARAM_SPACES);
                return Err(unknown("space", name, &valid));
            }
        }
    };
    Ok(e)
}

/// Every fixed space plus one instance of each parametrized family.
pub fn spaces() -> Vec<SpaceEntry> {
    FIXED_SPACES
        .iter()
        .chain(&["Sphere(3)", "CP(2)", "BZ2^1"])
        .map(|n| space(n).expect("catalog name"))
        .collect()
}

pub fn space_names() -> Vec<&'static str> {
    FIXED_SPACES.iter().chain(&PARAM_SPACES).copied().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transgression {
    /// Determined by the SW classes (zero for trivial ones).
    Determined,
    /// Not expressible as a transgression of fiber generators.
    Undetermined(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BundleEntry {
    pub name: String,
    pub base: String,
    pub spec: EquivariantBundleSpec,
    /// Catalog space the total space is known to be.
    pub total_space: Option<String>,
    pub transgression: Transgression,
    pub description: String,
}

const BUNDLES: [&str; 9] = [
    "rho1",
    "rho2",
    "rho3",
    "rho4",
    "rho5",
    "rho6",
    "zeta_n",
    "phi_n",
    "free-sphere",
];

pub fn bundle_names() -> Vec<&'static str> {
    BUNDLES.to_vec()
}

/// Looks up a bundle. `zeta_n` and `phi_n` take `n` (also accepted as a
/// suffix, `zeta_2`), `free-sphere` takes the rank `k` of the sphere bundle.
pub fn bundle(name: &str, n: Option<usize>, k: Option<u32>) -> Result<BundleEntry> {
    let (stem, suffix) = match name
        .strip_suffix("_n")
        .map_or_else(|| name.rsplit_once('_'), |s| Some((s, "")))
    {
        Some((s, "")) => (s, None),
        Some((s, t)) if t.chars().all(|c| c.is_ascii_digit()) && !t.is_empty() => (
            s,
            Some(
                t.parse::<usize>()
                    .map_err(|_| unknown("bundle", name, &BUNDLES))?,
            ),
        ),
        _ => (name, None),
    };
    let n = suffix.or(n).unwrap_or(1);
    let so4 = || space("G2_SO4").map(|s| s.presentation);
    let u2pm = || space("G2_U2pm").map(|s| s.presentation);
    let s2 = || FiberSpec::sphere(2);
    let mk = |name: &str,
              base: &str,
              spec: EquivariantBundleSpec,
              total: Option<&str>,
              t: Transgression,
              d: &str| BundleEntry {
        name: name.to_string(),
        base: base.to_string(),
        spec,
        total_space: total.map(str::to_string),
        transgression: t,
        description: d.to_string(),
    };
    let e = match (stem, suffix) {
        ("rho1" | "rho2", None) => mk(
            stem,
            "G2_SO4",
            EquivariantBundleSpec::new(so4()?, s2()?)
                .with_sw(&["1", "u2", "u3"])
                .with_group(vec![GroupAction::Antipodal(0)]),
            Some("G2_U2pm"),
            Transgression::Determined,
            if stem == "rho1" {
                "S^2 -> G2/U(2)+ -> G2/SO(4)"
            } else {
                "S^2 -> G2/U(2)- -> G2/SO(4)"
            },
        ),
        ("rho3", None) => mk(
            stem,
            "G2_SO4",
            EquivariantBundleSpec::new(so4()?, FiberSpec::cp(2)?.with_names(vec!["c".into()])?),
            Some("G2_T2"),
            Transgression::Undetermined(
                "c^3 = 0 forces d_3(c) = 0, so reaching the total space needs a differential on c^2; only fiber generators can be seeded".into(),
            ),
            "CP^2 -> G2/U(1)xU(1) -> G2/SO(4)",
        ),
        ("rho4" | "rho5", None) => mk(
            stem,
            "G2_U2pm",
            EquivariantBundleSpec::new(u2pm()?, s2()?),
            Some("G2_T2"),
            Transgression::Determined,
            if stem == "rho4" {
                "S^2 -> G2/U(1)xU(1) -> G2/U(2)+"
            } else {
                "S^2 -> G2/U(1)xU(1) -> G2/U(2)-"
            },
        ),
        ("rho6", None) => mk(
            stem,
            "S6",
            EquivariantBundleSpec::new(space("S6")?.presentation, FiberSpec::cp(2)?),
            Some("G2_U2pm"),
            Transgression::Determined,
            "CP^2 -> G2/U(2)- -> S^6",
        ),
        ("zeta" | "phi", _) => {
            if n == 0 {
                return Err(Error::InvalidSpec(format!("{stem}_n needs n >= 1")));
            }
            let mut spec = EquivariantBundleSpec::new(u2pm()?, FiberSpec::spheres(&vec![3; n])?)
                .with_sw(&["1", "y", "y^2"]);
            if stem == "phi" {
                let mut actions = vec![GroupAction::Conjugation];
                actions.extend((0..n).map(GroupAction::Antipodal));
                spec = spec.with_group(actions);
            }
            mk(
                &format!("{stem}_{n}"),
                "G2_U2pm",
                spec,
                None,
                Transgression::Determined,
                if stem == "zeta" {
                    "(S^3)^n -> pullback of n copies of the unit sphere bundle -> G2/U(2)"
                } else {
                    "the same sphere bundle with Z2^(n+1) acting"
                },
            )
        }
        ("free-sphere", None) => {
            let k = k.unwrap_or(3);
            if k < 2 {
                return Err(Error::InvalidSpec("free-sphere needs k >= 2".into()));
            }
            mk(
                &format!("free-sphere({k})"),
                "point",
                EquivariantBundleSpec::new(AlgebraPresentation::trivial(), FiberSpec::sphere(k - 1)?)
                    .with_group(vec![GroupAction::Antipodal(0)]),
                Some(&format!("Sphere({})", k - 1)),
                Transgression::Determined,
                "antipodal Z2 on S^(k-1) over a point",
            )
        }
        _ => return Err(unknown("bundle", name, &BUNDLES)),
    };
    Ok(e)
}

/// The bundles used by checks, with parameters filled in.
pub fn bundles() -> Vec<BundleEntry> {
    [
        "rho1",
        "rho2",
        "rho3",
        "rho4",
        "rho5",
        "rho6",
        "zeta_1",
        "zeta_2",
        "phi_1",
        "phi_2",
        "free-sphere",
    ]
    .iter()
    .map(|n| bundle(n, None, None).expect("catalog name"))
    .collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BaseRef {
    Name(String),
    Inline(AlgebraPresentation),
}

#[derive(Deserialize)]
struct BundleDoc {
    base: BaseRef,
    fiber: FiberSpec,
    #[serde(default)]
    sw: Vec<Vec<String>>,
    #[serde(default)]
    group: GroupSpec,
}

/// Reads a bundle spec from JSON. The base is a catalog name or an inline
/// presentation.
pub fn parse_bundle_json(s: &str) -> Result<EquivariantBundleSpec> {
    let doc: BundleDoc = serde_json::from_str(s).map_err(|e| Error::Parse {
        input: s.chars().take(80).collect(),
        message: e.to_string(),
    })?;
    let base = match doc.base {
        BaseRef::Name(n) => space(&n)?.presentation,
        BaseRef::Inline(p) => p,
    };
    let spec = EquivariantBundleSpec {
        base,
        fiber: doc.fiber,
        sw: doc.sw,
        group: doc.group,
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub dim: u32,
    pub palindromic: bool,
    /// Degrees `k` where `H^k × H^{dim−k} → H^dim` is degenerate.
    pub degenerate: Vec<u32>,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.palindromic && self.degenerate.is_empty()
    }
}

/// Poincaré duality over F2 for a ring claimed to be the cohomology of a
/// closed `dim`-manifold: the series is palindromic and vanishes above
/// `dim`, and the cup product pairing into the top degree is perfect.
pub fn poincare_duality(p: &AlgebraPresentation, dim: u32) -> Result<DualityReport> {
    let bound = (2 * dim).max(p.max_relation_degree()).max(1);
    let ring: Ring = RewriteSystem::normalize(p, bound)?;
    let series = ring.hilbert_series(bound)?;
    let palindromic = (0..=dim).all(|k| series[k as usize] == series[(dim - k) as usize])
        && series[dim as usize] == 1
        && series[dim as usize + 1..].iter().all(|d| *d == 0);
    let mut degenerate = Vec::new();
    if series[dim as usize] == 1 {
        for k in 0..=dim {
            let left = ring.degree_basis(k)?;
            let right = ring.degree_basis(dim - k)?;
            let rows = left
                .iter()
                .map(|a| {
                    let a = Element::from_monomial(&ring, a.clone())?;
                    let bits: Vec<bool> = right
                        .iter()
                        .map(|b| Ok(!a.mul_monomial(b)?.is_zero()))
                        .collect::<Result<_>>()?;
                    Ok(crate::linalg::BitVec::from_bools(&bits))
                })
                .collect::<Result<Vec<_>>>()?;
            let m = BitMatrix::from_rows(right.len(), rows);
            if left.len() != right.len() || m.rank() != left.len() {
                degenerate.push(k);
            }
        }
    }
    Ok(DualityReport {
        dim,
        palindromic,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for s in spaces() {
            assert!(
                RewriteSystem::normalize(&s.presentation, 12).is_ok(),
                "{}",
                s.name
            );
        }
        assert_eq!(bundles().len(), 11);
        assert_eq!(
            bundle("zeta_3", None, None).unwrap().spec.fiber.names(),
            ["z1", "z2", "z3"]
        );
        assert_eq!(bundle("phi_n", Some(2), None).unwrap().spec.group.rank, 3);
        assert!(matches!(space("G2"), Err(Error::UnknownName { .. })));
        assert!(matches!(
            bundle("rho7", None, None),
            Err(Error::UnknownName { .. })
        ));
    }

    #[test]
    fn closed_manifolds_satisfy_duality() {
        for s in spaces() {
            if let Some(d) = s.manifold_dim {
                assert!(
                    poincare_duality(&s.presentation, d).unwrap().holds(),
                    "{}",
                    s.name
                );
            }
        }
    }

    #[test]
    fn dropping_a_relation_breaks_duality() {
        let p = space("G2_SO4").unwrap().presentation;
        let mutated = p.without_relation(1);
        assert!(!poincare_duality(&mutated, 8).unwrap().holds());
    }

    #[test]
    fn json_specs() {
        let spec = parse_bundle_json(
            r#"{"base": "G2_SO4", "fiber": {"spheres": [2]}, "sw": [["1", "u2", "u3"]],
                "group": {"rank": 1, "actions": [{"antipodal": 0}]}}"#,
        )
        .unwrap();
        assert_eq!(spec, bundle("rho1", None, None).unwrap().spec);
        let inline = parse_bundle_json(
            r#"{"base": {"generators": [{"name": "a", "degree": 2}], "relations": ["a^2"]}, "fiber": {"cp": 1, "names": ["c"]}}"#,
        );
        assert!(inline.is_ok(), "{inline:?}");
    }
}
