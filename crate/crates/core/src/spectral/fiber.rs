use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPresentation, Element, Generator, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberKind {
    /// A product of spheres of the given dimensions; empty means a point.
    Spheres(Vec<u32>),
    /// Complex projective space of the given complex dimension.
    Cp(u32),
}

/// Cohomology of the fiber: exterior classes `z_i` for a product of
/// spheres, or a truncated polynomial ring `F2[y]/(y^{m+1})` for `CP^m`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FiberDoc", into = "FiberDoc")]
pub struct FiberSpec {
    kind: FiberKind,
    names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FiberDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spheres: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cp: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl TryFrom<FiberDoc> for FiberSpec {
    type Error = Error;

    fn try_from(doc: FiberDoc) -> Result<Self> {
        let spec = match (doc.spheres, doc.cp) {
            (Some(dims), None) => FiberSpec::spheres(&dims)?,
            (None, Some(m)) => FiberSpec::cp(m)?,
            _ => {
                return Err(Error::InvalidSpec(
                    "fiber needs exactly one of `spheres` or `cp`".into(),
                ))
            }
        };
        match doc.names {
            Some(names) => spec.with_names(names),
            None => Ok(spec),
        }
    }
}

impl From<FiberSpec> for FiberDoc {
    fn from(f: FiberSpec) -> Self {
        let default_names = match &f.kind {
            FiberKind::Spheres(d) => FiberSpec::spheres(d).map(|s| s.names),
            FiberKind::Cp(m) => FiberSpec::cp(*m).map(|s| s.names),
        };
        let names = (default_names.as_ref().ok() != Some(&f.names)).then_some(f.names);
        match f.kind {
            FiberKind::Spheres(d) => FiberDoc {
                spheres: Some(d),
                cp: None,
                names,
            },
            FiberKind::Cp(m) => FiberDoc {
                spheres: None,
                cp: Some(m),
                names,
            },
        }
    }
}

impl FiberSpec {
    /// `S^{k_1} × … × S^{k_n}`. Generators are `z` for a single sphere and
    /// `z1, …, zn` otherwise.
    pub fn spheres(dims: &[u32]) -> Result<Self> {
        if let Some(k) = dims.iter().find(|k| **k == 0) {
            return Err(Error::InvalidSpec(format!(
                "sphere dimension {k} is not supported"
            )));
        }
        let names = match dims.len() {
            1 => vec!["z".to_string()],
            n => (1..=n).map(|i| format!("z{i}")).collect(),
        };
        Ok(FiberSpec {
            kind: FiberKind::Spheres(dims.to_vec()),
            names,
        })
    }

    pub fn sphere(k: u32) -> Result<Self> {
        Self::spheres(&[k])
    }

    pub fn point() -> Self {
        FiberSpec {
            kind: FiberKind::Spheres(Vec::new()),
            names: Vec::new(),
        }
    }

    pub fn cp(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSpec("CP^0 is a point; use `point`".into()));
        }
        Ok(FiberSpec {
            kind: FiberKind::Cp(m),
            names: vec!["y".to_string()],
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.names.len() {
            return Err(Error::InvalidSpec(format!(
                "fiber has {} generators but {} names were given",
                self.names.len(),
                names.len()
            )));
        }
        self.names = names;
        self.presentation()?;
        Ok(self)
    }

    /// Parses `point`, `S3`, `S3xS3`, `(S3)^2` or `CP2`.
    pub fn parse(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            input: s.to_string(),
            message: "expected point, Sk, SkxSl..., (Sk)^n or CPm".into(),
        };
        let t = s.trim();
        if t.eq_ignore_ascii_case("point") {
            return Ok(Self::point());
        }
        if let Some(m) = t.strip_prefix("CP").or_else(|| t.strip_prefix("cp")) {
            return Self::cp(m.parse().map_err(|_| err())?);
        }
        if let Some(rest) = t.strip_prefix("(S") {
            let (k, n) = rest.split_once(")^").ok_or_else(err)?;
            let k: u32 = k.parse().map_err(|_| err())?;
            let n: usize = n.parse().map_err(|_| err())?;
            return Self::spheres(&vec![k; n]);
        }
        let dims = t
            .split(['x', '×'])
            .map(|f| f.trim().strip_prefix('S').and_then(|k| k.parse().ok()))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(err)?;
        Self::spheres(&dims)
    }

    pub fn kind(&self) -> &FiberKind {
        &self.kind
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> Vec<Generator> {
        let degrees: Vec<u32> = match &self.kind {
            FiberKind::Spheres(d) => d.clone(),
            FiberKind::Cp(_) => vec![2],
        };
        self.names
            .iter()
            .zip(degrees)
            .map(|(name, degree)| Generator {
                name: name.clone(),
                degree,
            })
            .collect()
    }

    pub fn presentation(&self) -> Result<AlgebraPresentation> {
        let gens: Vec<(String, u32)> = self
            .generators()
            .into_iter()
            .map(|g| (g.name, g.degree))
            .collect();
        let relations: Vec<String> = match &self.kind {
            FiberKind::Spheres(_) => self.names.iter().map(|n| format!("{n}^2")).collect(),
            FiberKind::Cp(m) => vec![format!("{}^{}", self.names[0], m + 1)],
        };
        let rels: Vec<&str> = relations.iter().map(String::as_str).collect();
        AlgebraPresentation::new(gens, &rels)
    }

    /// Number of sphere factors (1 for projective space).
    pub fn factor_count(&self) -> usize {
        self.names.len()
    }

    /// Degree of the top class.
    pub fn top_degree(&self) -> u32 {
        match &self.kind {
            FiberKind::Spheres(d) => d.iter().sum(),
            FiberKind::Cp(m) => 2 * m,
        }
    }

    pub fn poincare_series(&self) -> Vec<usize> {
        let mut series = vec![1usize];
        let factors: Vec<Vec<usize>> = match &self.kind {
            FiberKind::Spheres(d) => d
                .iter()
                .map(|k| {
                    let mut f = vec![0; *k as usize + 1];
                    f[0] = 1;
                    f[*k as usize] = 1;
                    f
                })
                .collect(),
            FiberKind::Cp(m) => vec![(0..=2 * m).map(|i| usize::from(i % 2 == 0)).collect()],
        };
        for f in factors {
            series = convolve(&series, &f);
        }
        series
    }
}

pub(crate) fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl fmt::Display for FiberSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FiberKind::Spheres(d) if d.is_empty() => write!(f, "point"),
            FiberKind::Spheres(d) => {
                let parts: Vec<String> = d.iter().map(|k| format!("S{k}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            FiberKind::Cp(m) => write!(f, "CP{m}"),
        }
    }
}

impl fmt::Debug for FiberSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} {:?}", self.names)
    }
}

/// Transgression images of fiber generators, as base-ring elements.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransgressionSeed {
    images: BTreeMap<String, Element>,
}

impl TransgressionSeed {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, generator: &str, image: Element) -> &mut Self {
        self.images.insert(generator.to_string(), image);
        self
    }

    pub fn with(mut self, generator: &str, image: Element) -> Self {
        self.insert(generator, image);
        self
    }

    /// Parses each image in the base ring, in degree one more than its
    /// fiber generator.
    pub fn from_strings(base: &Ring, fiber: &FiberSpec, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut seed = Self::new();
        let gens = fiber.generators();
        for (name, image) in pairs {
            let g = gens
                .iter()
                .find(|g| g.name == *name)
                .ok_or_else(|| Error::InvalidSeed(format!("{name} is not a fiber generator")))?;
            seed.insert(name, Element::parse_in_degree(base, image, g.degree + 1)?);
        }
        Ok(seed)
    }

    pub fn images(&self) -> &BTreeMap<String, Element> {
        &self.images
    }

    pub fn get(&self, generator: &str) -> Option<&Element> {
        self.images.get(generator)
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Checks names and degrees against the fiber.
    pub fn validate(&self, fiber: &FiberSpec) -> Result<()> {
        let gens = fiber.generators();
        for (name, img) in &self.images {
            let g = gens
                .iter()
                .find(|g| &g.name == name)
                .ok_or_else(|| Error::InvalidSeed(format!("{name} is not a fiber generator")))?;
            if !img.is_zero() && img.degree() != g.degree + 1 {
                return Err(Error::InvalidSeed(format!(
                    "image of {name} must have degree {}, got {} of degree {}",
                    g.degree + 1,
                    img,
                    img.degree()
                )));
            }
        }
        Ok(())
    }
}
