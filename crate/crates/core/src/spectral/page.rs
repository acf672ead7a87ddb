use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::fiber::{FiberSpec, TransgressionSeed};
use super::model::Model;
use crate::algebra::{Element, Ring};
use crate::error::{Error, Result};
use crate::linalg::{BitMatrix, BitVec, Subquotient, Subspace};

/// A subspace of one block in which every basis vector carries an attached
/// vector of the model (a lift or a preimage), kept in step under row
/// reduction.
#[derive(Clone, Debug)]
struct Lifted {
    local: Subspace,
    attached: Vec<BitVec>,
}

impl Lifted {
    fn new(local_dim: usize, attached_dim: usize, pairs: Vec<(BitVec, BitVec)>) -> Lifted {
        let joined = Subspace::span(
            local_dim + attached_dim,
            pairs.into_iter().map(|(l, a)| l.concat(&a)),
        );
        let (locals, attached): (Vec<BitVec>, Vec<BitVec>) = joined
            .basis()
            .iter()
            .zip(joined.pivots())
            .filter(|(_, p)| **p < local_dim)
            .map(|(v, _)| (v.slice(0, local_dim), v.slice(local_dim, attached_dim)))
            .unzip();
        let local = Subspace::span(local_dim, locals.iter().cloned());
        debug_assert_eq!(local.basis(), locals.as_slice());
        Lifted { local, attached }
    }

    fn full(local_dim: usize, attach: impl Fn(usize) -> BitVec) -> Lifted {
        Lifted {
            local: Subspace::full(local_dim),
            attached: (0..local_dim).map(attach).collect(),
        }
    }

    fn zero(local_dim: usize) -> Lifted {
        Lifted {
            local: Subspace::zero(local_dim),
            attached: Vec::new(),
        }
    }

    /// The attached vector of `v`, if `v` lies in the subspace.
    fn attach(&self, v: &BitVec, attached_dim: usize) -> Option<BitVec> {
        let coords = self.local.coordinates(v)?;
        let mut out = BitVec::zeros(attached_dim);
        for i in coords.ones() {
            out += &self.attached[i];
        }
        Some(out)
    }

    fn pairs(&self) -> impl Iterator<Item = (BitVec, BitVec)> + '_ {
        self.local
            .basis()
            .iter()
            .cloned()
            .zip(self.attached.iter().cloned())
    }
}

/// One bidegree `(p, q)` of a page, as a subquotient of `E_2^{p,q}`.
///
/// Cycles carry lifts into the filtered model, boundaries carry preimages,
/// which is what computing the next differential needs.
#[derive(Clone, Debug)]
pub struct Piece {
    zbar: Lifted,
    bbar: Lifted,
    sq: Subquotient,
    rep_lifts: Vec<BitVec>,
    truncated: bool,
}

impl Piece {
    fn new(zbar: Lifted, bbar: Lifted, n: u32, model: &Model, truncated: bool) -> Result<Piece> {
        let sq = Subquotient::new(zbar.local.clone(), bbar.local.clone())?;
        let rep_lifts = sq
            .reps()
            .iter()
            .map(|r| zbar.attach(r, model.dim(n)).expect("reps are cycles"))
            .collect();
        Ok(Piece {
            zbar,
            bbar,
            sq,
            rep_lifts,
            truncated,
        })
    }

    pub fn dim(&self) -> usize {
        self.sq.dim()
    }

    /// Canonical representatives in `E_2^{p,q}` coordinates.
    pub fn reps(&self) -> &[BitVec] {
        self.sq.reps()
    }

    pub fn cycles(&self) -> &Subspace {
        self.sq.cycles()
    }

    pub fn boundaries(&self) -> &Subspace {
        self.sq.boundaries()
    }

    /// The representative with the given class coordinates.
    pub fn lift(&self, coords: &BitVec) -> BitVec {
        self.sq.lift(coords)
    }

    /// Class coordinates of an `E_2^{p,q}` vector; `None` if it is not a
    /// cycle on this page.
    pub fn coords(&self, v: &BitVec) -> Option<BitVec> {
        self.sq.coords(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TurnStats {
    pub r: u32,
    pub differentials: usize,
    pub total_rank: usize,
    pub composites_checked: usize,
    pub degrees_checked: usize,
}

/// Page `E_r` of the Serre spectral sequence of a fibration with trivial
/// coefficients, exact in total degrees up to `bound`.
#[derive(Clone)]
pub struct Page {
    model: Arc<Model>,
    r: u32,
    pieces: BTreeMap<(u32, u32), Piece>,
    differentials: Option<BTreeMap<(u32, u32), BitMatrix>>,
    quiet: bool,
    stable: bool,
    history: Vec<TurnStats>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceDump {
    pub p: u32,
    pub q: u32,
    pub dim: usize,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageDump {
    pub r: u32,
    pub bound: u32,
    pub stable: bool,
    pub totals: Vec<usize>,
    pub pieces: Vec<PieceDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeibnizReport {
    pub checked: usize,
    pub failures: usize,
}

impl Page {
    fn fresh(model: Arc<Model>, r: u32, history: Vec<TurnStats>) -> Result<Page> {
        let top = model.top();
        let mut pieces = BTreeMap::new();
        for n in 0..=top {
            for p in model.bidegrees(n) {
                let dim = model.block_dim(n, p);
                let zbar = Lifted::full(dim, |i| model.include(n, p, &BitVec::unit(dim, i)));
                let piece = Piece::new(zbar, Lifted::zero(dim), n, &model, n == top)?;
                pieces.insert((p, n - p), piece);
            }
        }
        let mut page = Page {
            model,
            r,
            pieces,
            differentials: None,
            quiet: true,
            stable: false,
            history,
        };
        page.stable = page.derivation_is_zero() || page.vacuous();
        Ok(page)
    }

    fn derivation_is_zero(&self) -> bool {
        self.model.seed_elements().iter().all(Element::is_zero)
    }

    /// Whether no differential `d_s`, `s ≥ r`, has both a nonzero source
    /// and a nonzero target with source degree within the bound.
    fn vacuous(&self) -> bool {
        let bound = self.model.bound();
        self.pieces.iter().all(|(&(p, q), piece)| {
            piece.dim() == 0
                || p + q > bound
                || (self.r..=q + 1).all(|s| self.dim(p + s, q + 1 - s) == 0)
        })
    }

    /// `E_2 = H*(B) ⊗ H*(F)` with all differentials zero.
    pub fn build_e2(base: &Ring, fiber: &FiberSpec, bound: u32) -> Result<Page> {
        let model = Model::new(base, fiber, &TransgressionSeed::new(), bound)?;
        Self::fresh(Arc::new(model), 2, Vec::new())
    }

    /// Installs transgressions `d(1 ⊗ z) = seed(z) ⊗ 1`. Allowed while no
    /// differential has acted yet and each seeded generator transgresses on
    /// this page or a later one.
    pub fn seed_transgression(&self, seed: &TransgressionSeed) -> Result<Page> {
        if !self.quiet {
            return Err(Error::InvalidPage(format!(
                "cannot seed on page {} after a nonzero differential",
                self.r
            )));
        }
        seed.validate(self.model.fiber())?;
        let mut merged = self.model.seed().clone();
        for (name, img) in seed.images() {
            let g = self
                .model
                .fiber()
                .generators()
                .into_iter()
                .find(|g| &g.name == name)
                .expect("validated");
            if g.degree + 1 < self.r {
                return Err(Error::InvalidSeed(format!(
                    "{name} transgresses on page {} but this is page {}",
                    g.degree + 1,
                    self.r
                )));
            }
            if let Some(old) = merged.get(name) {
                if !old.is_zero() && old.transport(img.ring())? != *img {
                    return Err(Error::InvalidSeed(format!(
                        "{name} is already seeded with {old}"
                    )));
                }
            }
            merged.insert(name, img.clone());
        }
        let model = Model::new(
            self.model.base(),
            self.model.fiber(),
            &merged,
            self.model.bound(),
        )?;
        Self::fresh(Arc::new(model), self.r, self.history.clone())
    }

    /// The current seeds as base-ring elements.
    pub fn seeds(&self) -> &TransgressionSeed {
        self.model.seed()
    }

    /// Fills in `d_r` on every piece whose source degree is within the
    /// bound, evaluating the derivation on lifts of the representatives.
    pub fn propagate_leibniz(&self) -> Result<Page> {
        let model = &self.model;
        let r = self.r;
        let keys: Vec<(u32, u32)> = self
            .pieces
            .keys()
            .copied()
            .filter(|(p, q)| p + q <= model.bound())
            .collect();
        let mats = keys
            .par_iter()
            .map(|&(p, q)| {
                let n = p + q;
                let piece = &self.pieces[&(p, q)];
                let target = (q + 1 >= r).then(|| (p + r, q + 1 - r));
                let tpiece = target.and_then(|t| self.pieces.get(&t));
                let rows = tpiece.map_or(0, Piece::dim);
                let mut cols = Vec::with_capacity(piece.dim());
                for lift in &piece.rep_lifts {
                    let dx = model.apply(n, lift);
                    if let Some(f) = model.filtration(n + 1, &dx) {
                        if f < p + r {
                            return Err(Error::InvalidPage(format!(
                                "lift at ({p}, {q}) does not survive to page {r}"
                            )));
                        }
                    }
                    let col = match (target, tpiece) {
                        (Some((tp, _)), Some(tpc)) => {
                            let t = model.project(n + 1, tp, &dx);
                            tpc.coords(&t).ok_or_else(|| {
                                Error::InvalidPage(format!(
                                    "d_{r} from ({p}, {q}) leaves the cycles of its target"
                                ))
                            })?
                        }
                        _ => BitVec::zeros(0),
                    };
                    cols.push(col);
                }
                Ok(((p, q), BitMatrix::from_columns(rows, &cols)))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mut page = self.clone();
        page.differentials = Some(mats);
        Ok(page)
    }

    /// Passes to `E_{r+1} = H(E_r, d_r)`, checking `d∘d = 0` and the
    /// dimension count in every total degree up to the bound.
    pub fn turn_page(&self) -> Result<Page> {
        let pg = match self.differentials {
            Some(_) => self.clone(),
            None => self.propagate_leibniz()?,
        };
        let diffs = pg.differentials.as_ref().expect("propagated");
        let model = pg.model.clone();
        let r = pg.r;
        let bound = model.bound();

        let mut composites = 0;
        for (&(p, q), m) in diffs {
            if q + 1 < r {
                continue;
            }
            if let Some(m2) = diffs.get(&(p + r, q + 1 - r)) {
                composites += 1;
                if m.nrows() > 0 && m2.ncols() > 0 && !m2.mul(m).is_zero() {
                    return Err(Error::DifferentialSquare { r, p, q });
                }
            }
        }

        let mut z_pairs: BTreeMap<(u32, u32), Vec<(BitVec, BitVec)>> = BTreeMap::new();
        let mut b_pairs: BTreeMap<(u32, u32), Vec<(BitVec, BitVec)>> = BTreeMap::new();
        for (&(p, q), m) in diffs {
            let n = p + q;
            let piece = &pg.pieces[&(p, q)];
            let target = (q + 1 >= r).then(|| (p + r, q + 1 - r));
            let tpiece = target.and_then(|t| pg.pieces.get(&t));
            let reps = piece.reps();
            for kappa in m.kernel_basis().basis() {
                let mut v = BitVec::zeros(piece.sq.ambient_dim());
                let mut x = BitVec::zeros(model.dim(n));
                for i in kappa.ones() {
                    v += &reps[i];
                    x += &piece.rep_lifts[i];
                }
                if let (Some((tp, _)), Some(tpc)) = (target, tpiece) {
                    let t = model.project(n + 1, tp, &model.apply(n, &x));
                    let corr =
                        tpc.bbar
                            .attach(&t, model.dim(n))
                            .ok_or_else(|| Error::Bookkeeping {
                                r,
                                degree: n,
                                detail: format!(
                                    "kernel class at ({p}, {q}) maps outside the boundaries"
                                ),
                            })?;
                    x += &corr;
                }
                if let Some(f) = model.filtration(n + 1, &model.apply(n, &x)) {
                    if f <= p + r {
                        return Err(Error::Bookkeeping {
                            r,
                            degree: n,
                            detail: format!(
                                "corrected lift at ({p}, {q}) is not a cycle to page {}",
                                r + 1
                            ),
                        });
                    }
                }
                z_pairs.entry((p, q)).or_default().push((v, x));
            }
            if let (Some(t), Some(_)) = (target, tpiece) {
                let entry = b_pairs.entry(t).or_default();
                for lift in &piece.rep_lifts {
                    let image = model.project(n + 1, t.0, &model.apply(n, lift));
                    entry.push((image, lift.clone()));
                }
            }
        }

        let keys: Vec<(u32, u32)> = pg.pieces.keys().copied().collect();
        let built = keys
            .par_iter()
            .map(|&(p, q)| {
                let n = p + q;
                let old = &pg.pieces[&(p, q)];
                let local_dim = old.sq.ambient_dim();
                let prev_dim = if n == 0 { 0 } else { model.dim(n - 1) };
                let mut bb: Vec<(BitVec, BitVec)> = old.bbar.pairs().collect();
                bb.extend(b_pairs.get(&(p, q)).cloned().unwrap_or_default());
                let bbar = Lifted::new(local_dim, prev_dim, bb);
                let zbar = if old.truncated {
                    old.zbar.clone()
                } else {
                    let mut zz = z_pairs.get(&(p, q)).cloned().unwrap_or_default();
                    zz.extend(old.bbar.pairs().map(|(b, z)| (b, model.apply(n - 1, &z))));
                    Lifted::new(local_dim, model.dim(n), zz)
                };
                Ok(((p, q), Piece::new(zbar, bbar, n, &model, old.truncated)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;

        let mut degrees_checked = 0;
        for n in 0..=bound {
            let before: usize = pg.degree_pieces(n).map(|(_, pc)| pc.dim()).sum();
            let after: usize = built
                .iter()
                .filter(|((p, q), _)| p + q == n)
                .map(|(_, pc)| pc.dim())
                .sum();
            let out: usize = diffs
                .iter()
                .filter(|((p, q), _)| p + q == n)
                .map(|(_, m)| m.rank())
                .sum();
            let inc: usize = diffs
                .iter()
                .filter(|((p, q), _)| p + q + 1 == n)
                .map(|(_, m)| m.rank())
                .sum();
            if after + out + inc != before {
                return Err(Error::Bookkeeping {
                    r,
                    degree: n,
                    detail: format!(
                        "E_{} has dimension {after}, expected {before} - {out} - {inc}",
                        r + 1
                    ),
                });
            }
            degrees_checked += 1;
        }

        let total_rank: usize = diffs.values().map(BitMatrix::rank).sum();
        let mut history = pg.history.clone();
        history.push(TurnStats {
            r,
            differentials: diffs.len(),
            total_rank,
            composites_checked: composites,
            degrees_checked,
        });
        let mut next = Page {
            model,
            r: r + 1,
            pieces: built,
            differentials: None,
            quiet: pg.quiet && total_rank == 0,
            stable: false,
            history,
        };
        next.stable = next.derivation_is_zero() || next.vacuous();
        Ok(next)
    }

    /// Seeds, then turns pages until every remaining differential is zero
    /// for bidegree reasons.
    pub fn run_to_einfty(
        base: &Ring,
        fiber: &FiberSpec,
        seed: &TransgressionSeed,
        bound: u32,
    ) -> Result<Page> {
        let mut page = Self::build_e2(base, fiber, bound)?;
        if !seed.is_empty() {
            page = page.seed_transgression(seed)?;
        }
        let limit = fiber.top_degree() + 3;
        while !page.stable {
            if page.r > limit {
                return Err(Error::InvalidPage(format!(
                    "no stable page by r = {}",
                    page.r
                )));
            }
            page = page.turn_page()?;
        }
        Ok(page)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn bound(&self) -> u32 {
        self.model.bound()
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    /// Whether every differential so far was zero, so `E_r = E_2`.
    pub fn is_quiet(&self) -> bool {
        self.quiet
    }

    pub fn history(&self) -> &[TurnStats] {
        &self.history
    }

    pub fn base(&self) -> &Ring {
        self.model.base()
    }

    pub fn fiber(&self) -> &FiberSpec {
        self.model.fiber()
    }

    /// The ring `H*(B) ⊗ H*(F)` in which representatives live.
    pub fn e2_ring(&self) -> &Ring {
        self.model.total()
    }

    pub fn piece(&self, p: u32, q: u32) -> Option<&Piece> {
        self.pieces.get(&(p, q))
    }

    pub fn dim(&self, p: u32, q: u32) -> usize {
        self.piece(p, q).map_or(0, Piece::dim)
    }

    fn degree_pieces(&self, n: u32) -> impl Iterator<Item = (u32, &Piece)> + '_ {
        self.pieces
            .iter()
            .filter(move |((p, q), _)| p + q == n)
            .map(|((p, _), pc)| (*p, pc))
    }

    /// Nonzero `(p, q) → dim` within the bound.
    pub fn dims(&self) -> BTreeMap<(u32, u32), usize> {
        self.pieces
            .iter()
            .filter(|((p, q), pc)| p + q <= self.bound() && pc.dim() > 0)
            .map(|(k, pc)| (*k, pc.dim()))
            .collect()
    }

    /// `d_r` out of `(p, q)`, once propagated.
    pub fn differential(&self, p: u32, q: u32) -> Option<&BitMatrix> {
        self.differentials.as_ref()?.get(&(p, q))
    }

    /// Total dimension in each degree `0..=bound`.
    pub fn additive_total(&self) -> Vec<usize> {
        (0..=self.bound())
            .map(|n| self.degree_pieces(n).map(|(_, pc)| pc.dim()).sum())
            .collect()
    }

    /// Representatives at `(p, q)` rendered as polynomials.
    pub fn labels(&self, p: u32, q: u32) -> Vec<String> {
        self.piece(p, q)
            .map(|pc| {
                pc.reps()
                    .iter()
                    .map(|v| self.model.label(p + q, p, v))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// The element of `H*(B) ⊗ H*(F)` with the given block coordinates.
    pub fn element(&self, p: u32, q: u32, local: &BitVec) -> Element {
        self.model.local_element(p + q, p, local)
    }

    /// Bidegree and block coordinates of a bihomogeneous element.
    pub fn element_vector(&self, e: &Element) -> Result<Option<(u32, u32, BitVec)>> {
        let comps = self.model.components(e)?;
        let n = e.degree();
        match comps.len() {
            0 => Ok(None),
            1 => {
                let (p, v) = comps.into_iter().next().unwrap();
                Ok(Some((p, n - p, v)))
            }
            _ => Err(Error::DegreeMismatch(format!("{e} is not bihomogeneous"))),
        }
    }

    /// Class coordinates of a bihomogeneous element on this page, or
    /// `None` if it is not a cycle.
    pub fn class_of(&self, e: &Element) -> Result<Option<(u32, u32, BitVec)>> {
        match self.element_vector(e)? {
            None => Ok(None),
            Some((p, q, v)) => Ok(self
                .piece(p, q)
                .and_then(|pc| pc.coords(&v))
                .map(|c| (p, q, c))),
        }
    }

    /// Whether the classes of `elements` span the whole of total degree `n`.
    /// Each element must be a bihomogeneous cycle of degree `n`.
    pub fn spans_degree(&self, n: u32, elements: &[Element]) -> Result<bool> {
        let ps: Vec<(u32, usize)> = self.degree_pieces(n).map(|(p, pc)| (p, pc.dim())).collect();
        let total: usize = ps.iter().map(|(_, d)| d).sum();
        let mut vectors = Vec::new();
        for e in elements {
            if e.degree() != n && !e.is_zero() {
                return Err(Error::DegreeMismatch(format!(
                    "{e} does not have degree {n}"
                )));
            }
            let Some((p, _, c)) = self.class_of(e)? else {
                if e.is_zero() {
                    continue;
                }
                return Err(Error::InvalidPage(format!(
                    "{e} is not a cycle on page {}",
                    self.r
                )));
            };
            let mut v = BitVec::zeros(0);
            for (pp, d) in &ps {
                v = v.concat(&if *pp == p {
                    c.clone()
                } else {
                    BitVec::zeros(*d)
                });
            }
            vectors.push(v);
        }
        Ok(Subspace::span(total, vectors).dim() == total)
    }

    /// Checks `d(ab) = d(a) b + a d(b)` on random elements of the model.
    pub fn leibniz_spot_check(
        &self,
        rng: &mut impl rand::Rng,
        samples: usize,
    ) -> Result<LeibnizReport> {
        let ring = self.model.total();
        let bound = self.bound();
        let mut failures = 0;
        let mut checked = 0;
        let degrees: Vec<u32> = (0..=bound).filter(|n| ring.dim(*n) > 0).collect();
        for _ in 0..samples {
            let da = degrees[rng.gen_range(0..degrees.len())];
            let fits: Vec<u32> = degrees
                .iter()
                .copied()
                .filter(|n| da + n <= bound)
                .collect();
            let db = fits[rng.gen_range(0..fits.len())];
            let a = random_element(ring, da, rng)?;
            let b = random_element(ring, db, rng)?;
            let lhs = self.model.d_element(&a.multiply(&b)?)?;
            let rhs = self
                .model
                .d_element(&a)?
                .multiply(&b)?
                .add(&a.multiply(&self.model.d_element(&b)?)?)?;
            checked += 1;
            if lhs != rhs {
                failures += 1;
            }
        }
        Ok(LeibnizReport { checked, failures })
    }

    /// Whether the bottom row never exceeds the base ring, degree by degree.
    pub fn edge_check(&self) -> bool {
        (0..=self.bound()).all(|p| self.dim(p, 0) <= self.model.base().dim(p))
    }

    pub fn dump(&self) -> PageDump {
        PageDump {
            r: self.r,
            bound: self.bound(),
            stable: self.stable,
            totals: self.additive_total(),
            pieces: self
                .dims()
                .keys()
                .map(|&(p, q)| PieceDump {
                    p,
                    q,
                    dim: self.dim(p, q),
                    labels: self.labels(p, q),
                })
                .collect(),
        }
    }

    /// Dimensions laid out with `q` upwards and `p` to the right, followed
    /// by the representatives of every nonzero piece.
    pub fn text_grid(&self) -> String {
        let dims = self.dims();
        let maxp = dims.keys().map(|k| k.0).max().unwrap_or(0);
        let maxq = dims.keys().map(|k| k.1).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "E_{}{}",
            self.r,
            if self.stable { " (stable)" } else { "" }
        );
        for q in (0..=maxq).rev() {
            let _ = write!(out, "{q:>3} |");
            for p in 0..=maxp {
                match dims.get(&(p, q)) {
                    Some(d) => {
                        let _ = write!(out, "{d:>3}");
                    }
                    None => out.push_str("  ."),
                }
            }
            out.push('\n');
        }
        out.push_str("    +");
        out.push_str(&"---".repeat(maxp as usize + 1));
        out.push_str("\n     ");
        for p in 0..=maxp {
            let _ = write!(out, "{p:>3}");
        }
        out.push('\n');
        for &(p, q) in dims.keys() {
            let _ = writeln!(out, "({p},{q}): {}", self.labels(p, q).join(", "));
        }
        out
    }
}

fn random_element(ring: &Ring, d: u32, rng: &mut impl rand::Rng) -> Result<Element> {
    let dim = ring.dim(d);
    let bits: Vec<bool> = (0..dim).map(|_| rng.gen_bool(0.5)).collect();
    Element::from_coords(ring, &BitVec::from_bools(&bits), d)
}

impl std::fmt::Debug for Page {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Page")
            .field("r", &self.r)
            .field("stable", &self.stable)
            .field("dims", &self.dims())
            .finish()
    }
}
