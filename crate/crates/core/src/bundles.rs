//! Sphere bundles at the level of mod 2 cohomology.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPresentation, Element, Ring};
use crate::error::{Error, Result};
use crate::linalg::BitMatrix;
use crate::spectral::{FiberKind, FiberSpec, TransgressionSeed};

/// Total Stiefel–Whitney class `1 + w_1 + … + w_k` of a rank `k` bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct SWClass {
    components: Vec<Element>,
}

impl SWClass {
    /// Splits a (non-homogeneous) total class such as `1 + u2 + u3` into its
    /// components. Components above `rank` must vanish.
    pub fn parse(base: &Ring, rank: u32, total: &str) -> Result<Self> {
        let mut components: Vec<Element> = (0..=rank).map(|j| Element::zero(base, j)).collect();
        components[0] = Element::one(base);
        let mut seen_one = false;
        for term in total.split('+').map(str::trim) {
            if term == "1" {
                seen_one = true;
                continue;
            }
            let e = Element::parse(base, term)?;
            if e.is_zero() {
                continue;
            }
            let j = e.degree() as usize;
            if j == 0 || j > rank as usize {
                return Err(Error::InvalidSpec(format!(
                    "{term} has degree {j}, outside 1..={rank}"
                )));
            }
            components[j] = components[j].add(&e)?;
        }
        if !seen_one {
            return Err(Error::InvalidSpec(format!(
                "total class {total:?} must start with 1"
            )));
        }
        Ok(SWClass { components })
    }

    pub fn trivial(base: &Ring, rank: u32) -> Self {
        let mut components: Vec<Element> = (0..=rank).map(|j| Element::zero(base, j)).collect();
        components[0] = Element::one(base);
        SWClass { components }
    }

    pub fn rank(&self) -> u32 {
        self.components.len() as u32 - 1
    }

    pub fn w(&self, j: u32) -> &Element {
        &self.components[j as usize]
    }

    pub fn components(&self) -> &[Element] {
        &self.components
    }

    pub fn base(&self) -> &Ring {
        self.components[0].ring()
    }

    pub fn render(&self) -> String {
        let mut parts = vec!["1".to_string()];
        parts.extend(
            self.components[1..]
                .iter()
                .filter(|w| !w.is_zero())
                .map(|w| {
                    let s = w.render();
                    if s.contains('+') {
                        format!("({s})")
                    } else {
                        s
                    }
                }),
        );
        parts.join(" + ")
    }
}

/// The top class `w_k`, the transgression of the fiber sphere.
pub fn euler_transgression(sw: &SWClass) -> Element {
    sw.w(sw.rank()).clone()
}

/// `Σ w_j t^{k−j}` in `ring`, which must contain the base generators and `t`.
pub fn dold_transgression(sw: &SWClass, ring: &Ring, t: &str) -> Result<Element> {
    let k = sw.rank();
    let t = Element::generator(ring, t)?;
    if t.degree() != 1 {
        return Err(Error::InvalidSpec(format!("{t} must have degree 1")));
    }
    let mut acc = Element::zero(ring, k);
    for j in 0..=k {
        let term = sw.w(j).transport(ring)?.multiply(&t.pow(k - j)?)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Betti numbers of the `S^{k−1}` bundle with Euler class `euler` of degree
/// `k`, from the Gysin sequence
/// `H^{i−k}(B) → H^i(B) → H^i(E) → H^{i−k+1}(B) → H^{i+1}(B)`.
pub fn gysin_betti(
    base: &Ring,
    euler: &Element,
    sphere_dim: u32,
    bound: u32,
) -> Result<Vec<usize>> {
    let k = sphere_dim + 1;
    if !euler.is_zero() && euler.degree() != k {
        return Err(Error::DegreeMismatch(format!(
            "Euler class of an S^{sphere_dim} bundle has degree {k}, got {euler} of degree {}",
            euler.degree()
        )));
    }
    if base.bound() < bound + 1 {
        return Err(Error::BoundTooSmall {
            bound: base.bound(),
            needed: bound + 1,
        });
    }
    let euler = euler.transport(base)?;
    // rank of ∪e out of degree `src`; zero when `src` is negative
    let cup_rank = |src: i64| -> Result<(usize, usize)> {
        if src < 0 {
            return Ok((0, 0));
        }
        let src = src as u32;
        let cols = base
            .degree_basis(src)?
            .iter()
            .map(|m| Ok(euler.mul_monomial(m)?.coords()))
            .collect::<Result<Vec<_>>>()?;
        let m = BitMatrix::from_columns(base.dim(src + k), &cols);
        Ok((m.rank(), cols.len()))
    };
    (0..=bound)
        .map(|i| {
            let (into, _) = cup_rank(i64::from(i) - i64::from(k))?;
            let (out, cols) = cup_rank(i64::from(i) - i64::from(k) + 1)?;
            Ok(base.dim(i) - into + cols - out)
        })
        .collect()
}

/// Names of the Borel variables: `t` for one factor, `t1 … tm` otherwise.
pub fn borel_variables(m: u32) -> Vec<String> {
    match m {
        1 => vec!["t".to_string()],
        m => (1..=m).map(|i| format!("t{i}")).collect(),
    }
}

/// `H*(B) ⊗ H*(BZ2^m)` for an action that is trivial on `H*(B)`. The
/// Borel variables come last, so they are the largest in the monomial order.
pub fn borel_base(m: u32, base: &AlgebraPresentation) -> Result<AlgebraPresentation> {
    if m == 0 {
        return Ok(base.clone());
    }
    let names = borel_variables(m);
    for n in &names {
        if base.generator_index(n).is_some() {
            return Err(Error::InvalidSpec(format!(
                "base generator {n} clashes with a Borel variable"
            )));
        }
    }
    let t = AlgebraPresentation::free(names.iter().map(|n| (n.as_str(), 1)))?;
    Ok(base.tensor(&t))
}

/// How one `Z/2` factor of the group acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupAction {
    /// Acts on the base, trivially in cohomology.
    Conjugation,
    /// Antipodal map on the given sphere factor of the fiber (from 0).
    Antipodal(usize),
    Trivial,
}

/// A sphere bundle with a `Z2^m` action, the group acting on the base
/// trivially in cohomology and antipodally on some sphere factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivariantBundleSpec {
    pub base: AlgebraPresentation,
    pub fiber: FiberSpec,
    /// One total class per sphere factor, or a single one shared by all.
    #[serde(default)]
    pub sw: Vec<Vec<String>>,
    #[serde(default)]
    pub group: GroupSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub rank: u32,
    #[serde(default)]
    pub actions: Vec<GroupAction>,
}

/// A spec resolved against a concrete Borel ring.
#[derive(Clone, Debug)]
pub struct AssembledBundle {
    pub ring: Ring,
    pub fiber: FiberSpec,
    pub seed: TransgressionSeed,
}

impl EquivariantBundleSpec {
    pub fn new(base: AlgebraPresentation, fiber: FiberSpec) -> Self {
        EquivariantBundleSpec {
            base,
            fiber,
            sw: Vec::new(),
            group: GroupSpec::default(),
        }
    }

    pub fn with_sw(mut self, components: &[&str]) -> Self {
        self.sw
            .push(components.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn with_group(mut self, actions: Vec<GroupAction>) -> Self {
        self.group = GroupSpec {
            rank: actions.len() as u32,
            actions,
        };
        self
    }

    /// The same bundle with the group forgotten.
    pub fn non_equivariant(&self) -> Self {
        EquivariantBundleSpec {
            group: GroupSpec::default(),
            ..self.clone()
        }
    }

    pub fn sphere_dims(&self) -> Vec<u32> {
        match self.fiber.kind() {
            FiberKind::Spheres(d) => d.clone(),
            FiberKind::Cp(_) => Vec::new(),
        }
    }

    /// Checks the action table and the SW data against the fiber.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if g.actions.len() != g.rank as usize {
            return Err(Error::InvalidSpec(format!(
                "group of rank {} lists {} actions",
                g.rank,
                g.actions.len()
            )));
        }
        let dims = self.sphere_dims();
        if matches!(self.fiber.kind(), FiberKind::Cp(_)) && (!self.sw.is_empty() || g.rank > 0) {
            return Err(Error::InvalidSpec(
                "Stiefel–Whitney data and group actions need a sphere fiber".into(),
            ));
        }
        let mut claimed = vec![None; dims.len()];
        for (k, a) in g.actions.iter().enumerate() {
            if let GroupAction::Antipodal(i) = a {
                let slot = claimed.get_mut(*i).ok_or_else(|| {
                    Error::InvalidSpec(format!(
                        "group factor {} acts on sphere factor {i}, but the fiber has {}",
                        k + 1,
                        dims.len()
                    ))
                })?;
                if let Some(prev) = slot.replace(k) {
                    return Err(Error::InvalidSpec(format!(
                        "group factors {} and {} both act antipodally on sphere factor {i}",
                        prev + 1,
                        k + 1
                    )));
                }
            }
        }
        if self.sw.len() > 1 && self.sw.len() != dims.len() {
            return Err(Error::InvalidSpec(format!(
                "{} SW classes for {} sphere factors",
                self.sw.len(),
                dims.len()
            )));
        }
        Ok(())
    }

    /// SW class of sphere factor `i` in `ring`.
    pub fn sw_class(&self, ring: &Ring, i: usize) -> Result<SWClass> {
        let rank = self.sphere_dims()[i] + 1;
        match self.sw.get(i).or(self.sw.first()) {
            None => Ok(SWClass::trivial(ring, rank)),
            Some(parts) => SWClass::parse(ring, rank, &parts.join(" + ")),
        }
    }
}

/// Builds the Borel base ring up to `bound` and the transgressions of the
/// fiber sphere classes: Dold's polynomial in the variable of the group
/// factor acting antipodally, the Euler class otherwise.
pub fn assemble_equivariant_seeds(
    spec: &EquivariantBundleSpec,
    bound: u32,
) -> Result<AssembledBundle> {
    spec.validate()?;
    let borel = borel_base(spec.group.rank, &spec.base)?;
    let ring =
        crate::algebra::RewriteSystem::normalize(&borel, bound.max(borel.max_relation_degree()))?;
    let vars = borel_variables(spec.group.rank);
    let names = spec.fiber.names().to_vec();
    let mut seed = TransgressionSeed::new();
    for (i, name) in names.iter().enumerate().take(spec.sphere_dims().len()) {
        let sw = spec.sw_class(&ring, i)?;
        let acting = spec
            .group
            .actions
            .iter()
            .position(|a| *a == GroupAction::Antipodal(i));
        let image = match acting {
            Some(k) => dold_transgression(&sw, &ring, &vars[k])?,
            None => euler_transgression(&sw),
        };
        seed.insert(name, image);
    }
    Ok(AssembledBundle {
        ring,
        fiber: spec.fiber.clone(),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RewriteSystem;

    fn so4(bound: u32) -> Ring {
        let p =
            AlgebraPresentation::new([("u2", 2), ("u3", 3)], &["u2^3 + u3^2", "u2^2*u3"]).unwrap();
        RewriteSystem::normalize(&p, bound).unwrap()
    }

    #[test]
    fn euler_and_dold() {
        let base = so4(12);
        let sw = SWClass::parse(&base, 3, "1 + u2 + u3").unwrap();
        assert_eq!(euler_transgression(&sw).render(), "u3");
        let borel = borel_base(1, base.source()).unwrap();
        let ring = RewriteSystem::normalize(&borel, 12).unwrap();
        let q = dold_transgression(&sw, &ring, "t").unwrap();
        assert_eq!(q, Element::parse(&ring, "t^3 + u2*t + u3").unwrap());
        let triv = SWClass::trivial(&base, 3);
        assert!(euler_transgression(&triv).is_zero());
        assert_eq!(
            dold_transgression(&triv, &ring, "t").unwrap(),
            Element::parse(&ring, "t^3").unwrap()
        );
    }

    #[test]
    fn gysin_over_g2_so4() {
        let base = so4(12);
        let u3 = Element::parse(&base, "u3").unwrap();
        assert_eq!(
            gysin_betti(&base, &u3, 2, 10).unwrap(),
            vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]
        );
        let zero = Element::zero(&base, 3);
        assert_eq!(
            gysin_betti(&base, &zero, 2, 10).unwrap(),
            vec![1, 0, 2, 1, 2, 2, 2, 1, 2, 0, 1]
        );
    }

    #[test]
    fn borel_base_shapes() {
        let base = so4(8);
        assert_eq!(borel_base(0, base.source()).unwrap(), *base.source());
        let b3 = borel_base(3, base.source()).unwrap();
        let names: Vec<&str> = b3.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["u2", "u3", "t1", "t2", "t3"]);
    }

    #[test]
    fn doubly_claimed_sphere_is_rejected() {
        let spec = EquivariantBundleSpec::new(
            AlgebraPresentation::trivial(),
            FiberSpec::sphere(2).unwrap(),
        )
        .with_group(vec![GroupAction::Antipodal(0), GroupAction::Antipodal(0)]);
        assert!(matches!(spec.validate(), Err(Error::InvalidSpec(_))));
        let spec = EquivariantBundleSpec::new(
            AlgebraPresentation::trivial(),
            FiberSpec::sphere(2).unwrap(),
        )
        .with_group(vec![GroupAction::Antipodal(1)]);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn free_circle_seed() {
        let spec = EquivariantBundleSpec::new(
            AlgebraPresentation::trivial(),
            FiberSpec::sphere(1).unwrap(),
        )
        .with_group(vec![GroupAction::Antipodal(0)]);
        let a = assemble_equivariant_seeds(&spec, 6).unwrap();
        assert_eq!(a.seed.get("z").unwrap().render(), "t^2");
    }
}
