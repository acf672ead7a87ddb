//! Dense linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words; a matrix is a list of packed rows.
//! Row reduction always produces the fully reduced echelon form, with the
//! pivot of a row being its lowest set index. Because that form is unique,
//! two [`Subspace`] values are equal exactly when their stored bases are.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn word_count(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A vector over F2. Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Parses a string of `0`/`1` characters, index 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| Self::from_bools(&b))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set index.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(
            self.len, other.len,
            "dot product of vectors of different length"
        );
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Bits `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len, "slice out of range");
        BitVec::from_indices(
            len,
            self.ones()
                .filter(|&i| i >= start && i < start + len)
                .map(|i| i - start),
        )
    }
}

impl AddAssign<&BitVec> for BitVec {
    fn add_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "adding vectors of different length");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl Add<&BitVec> for &BitVec {
    type Output = BitVec;

    fn add(self, rhs: &BitVec) -> BitVec {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot column of each remaining row, strictly increasing.
fn rref(rows: &mut Vec<BitVec>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                *row += &pivot_row;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// A dense F2 matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for row in &rows {
            assert_eq!(row.len(), cols, "row length does not match column count");
        }
        Self { cols, rows }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length does not match row count");
            for r in col.ones() {
                m.rows[r].set(c, true);
            }
        }
        m
    }

    /// Parses rows like `["110", "011"]`.
    pub fn parse_rows(rows: &[&str]) -> Option<Self> {
        let parsed: Option<Vec<BitVec>> = rows.iter().map(|r| BitVec::parse(r)).collect();
        let parsed = parsed?;
        let cols = parsed.first().map_or(0, BitVec::len);
        if parsed.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Self { cols, rows: parsed })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(
            self.nrows(),
            (0..self.nrows()).filter(|&r| self.rows[r].get(c)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(
            v.len(),
            self.cols,
            "vector length does not match column count"
        );
        BitVec::from_indices(
            self.nrows(),
            (0..self.nrows()).filter(|&r| self.rows[r].dot(v)),
        )
    }

    /// `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows(), "inner dimensions differ");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for j in row.ones() {
                    acc += &other.rows[j];
                }
                acc
            })
            .collect();
        BitMatrix {
            cols: other.cols,
            rows,
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        rref(&mut rows, self.cols).len()
    }

    /// Basis of `{ v : self · v = 0 }`.
    pub fn kernel_basis(&self) -> Subspace {
        let mut rows = self.rows.clone();
        let pivots = rref(&mut rows, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vectors = (0..self.cols).filter(|&c| !is_pivot[c]).map(|free| {
            let mut v = BitVec::unit(self.cols, free);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            v
        });
        Subspace::span(self.cols, vectors)
    }

    /// Column space, as a subspace of `F2^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.nrows(), self.transpose().rows)
    }

    /// Some `x` with `self · x = b`, or `None` when `b` is not in the image.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>> {
        if b.len() != self.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                found: b.len(),
            });
        }
        let mut rows: Vec<BitVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| row.concat(&BitVec::from_bools(&[b.get(r)])))
            .collect();
        let pivots = rref(&mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.cols);
        for (row, &p) in rows.iter().zip(&pivots) {
            if row.get(self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &BitMatrix) -> Subspace {
    m.kernel_basis()
}

pub fn solve(m: &BitMatrix, b: &BitVec) -> Result<Option<BitVec>> {
    m.solve(b)
}

/// A linear subspace of `F2^ambient`, held in reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| BitVec::unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = BitVec>) -> Self {
        let mut basis: Vec<BitVec> = vectors.into_iter().collect();
        for v in &basis {
            assert_eq!(
                v.len(),
                ambient,
                "vector length does not match ambient dimension"
            );
        }
        let pivots = rref(&mut basis, ambient);
        Self {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn as_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.ambient, self.basis.clone())
    }

    /// The canonical representative of `v + self`: zero at every pivot.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut out = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out.get(p) {
                out += row;
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let coords = BitVec::from_indices(
            self.dim(),
            self.pivots
                .iter()
                .enumerate()
                .filter(|(_, &p)| v.get(p))
                .map(|(i, _)| i),
        );
        (self.combine(&coords) == *v).then_some(coords)
    }

    /// `Σ c_i · basis_i`.
    pub fn combine(&self, coords: &BitVec) -> BitVec {
        assert_eq!(coords.len(), self.dim());
        let mut out = BitVec::zeros(self.ambient);
        for i in coords.ones() {
            out += &self.basis[i];
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn with(&self, extra: impl IntoIterator<Item = BitVec>) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().cloned().chain(extra))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient", &self.ambient)
            .field("basis", &self.basis)
            .finish()
    }
}

/// Vectors projecting to a basis of `whole / sub`.
///
/// The result is canonical: each vector is reduced modulo `sub` and the set is
/// in reduced echelon form, so none of them lies in `sub`.
pub fn quotient_reps(sub: &Subspace, whole: &Subspace) -> Result<Vec<BitVec>> {
    if sub.ambient != whole.ambient {
        return Err(Error::DimensionMismatch {
            expected: whole.ambient,
            found: sub.ambient,
        });
    }
    if let Some(bad) = sub.basis.iter().position(|v| !whole.contains(v)) {
        return Err(Error::NotContained(format!(
            "basis vector {} of the subspace is outside the ambient subspace",
            sub.basis[bad]
        )));
    }
    let reduced = whole.basis.iter().map(|v| sub.reduce(v));
    Ok(Subspace::span(whole.ambient, reduced).basis)
}

/// A subquotient `cycles / boundaries` with a canonical choice of coset
/// representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    cycles: Subspace,
    boundaries: Subspace,
    reps: Subspace,
}

impl Subquotient {
    pub fn new(cycles: Subspace, boundaries: Subspace) -> Result<Self> {
        let reps = quotient_reps(&boundaries, &cycles)?;
        let reps = Subspace::span(cycles.ambient, reps);
        Ok(Self {
            cycles,
            boundaries,
            reps,
        })
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            cycles: Subspace::full(ambient),
            boundaries: Subspace::zero(ambient),
            reps: Subspace::full(ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.cycles.ambient
    }

    pub fn cycles(&self) -> &Subspace {
        &self.cycles
    }

    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }

    pub fn reps(&self) -> &[BitVec] {
        self.reps.basis()
    }

    /// Coordinates of the class of `v`, or `None` if `v` is not a cycle.
    pub fn coords(&self, v: &BitVec) -> Option<BitVec> {
        // reps are reduced modulo the boundaries, so after reducing `v` the
        // remainder must be an exact combination of reps.
        self.reps.coordinates(&self.boundaries.reduce(v))
    }

    pub fn lift(&self, coords: &BitVec) -> BitVec {
        self.reps.combine(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::parse_rows(rows).unwrap()
    }

    fn v(s: &str) -> BitVec {
        BitVec::parse(s).unwrap()
    }

    /// Every vector of F2^n, by brute force.
    fn all_vectors(n: usize) -> Vec<BitVec> {
        (0..1usize << n)
            .map(|mask| BitVec::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1)))
            .collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&BitMatrix::identity(3)), 3);
        assert_eq!(rank(&BitMatrix::zeros(4, 7)), 0);
        assert_eq!(rank(&m(&["110", "011", "101"])), 2);
    }

    #[test]
    fn rank_leaves_input_alone() {
        let a = m(&["110", "011", "101"]);
        let copy = a.clone();
        assert_eq!(a.rank(), a.rank());
        assert_eq!(a, copy);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&BitMatrix::identity(3)).dim(), 0);
        assert_eq!(kernel_basis(&BitMatrix::zeros(2, 5)).dim(), 5);

        let k = kernel_basis(&m(&["111"]));
        assert_eq!(k.dim(), 2);
        let brute: Vec<BitVec> = all_vectors(3)
            .into_iter()
            .filter(|x| m(&["111"]).mul_vec(x).is_zero())
            .collect();
        assert_eq!(brute.len(), 4);
        for x in &brute {
            assert!(k.contains(x));
        }
        assert!(k.contains(&v("110")) && k.contains(&v("011")));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve(&BitMatrix::identity(3), &v("101")).unwrap(),
            Some(v("101"))
        );
        assert_eq!(solve(&BitMatrix::zeros(3, 3), &v("010")).unwrap(), None);

        let a = m(&["11", "01"]);
        let brute: Vec<BitVec> = all_vectors(2)
            .into_iter()
            .filter(|x| a.mul_vec(x) == v("10"))
            .collect();
        assert_eq!(brute, vec![v("10")]);
        assert_eq!(solve(&a, &v("10")).unwrap(), Some(v("10")));

        // the same bit strings read as columns
        let c = BitMatrix::from_columns(2, &[v("11"), v("01")]);
        assert_eq!(solve(&c, &v("10")).unwrap(), Some(v("11")));
    }

    #[test]
    fn solve_rejects_wrong_length() {
        let err = solve(&BitMatrix::identity(3), &v("10")).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 3,
                found: 2
            }
        ));
    }

    #[test]
    fn quotient_examples() {
        let whole = Subspace::span(3, [v("100"), v("010")]);
        assert!(quotient_reps(&whole, &whole).unwrap().is_empty());
        assert_eq!(quotient_reps(&Subspace::zero(3), &whole).unwrap().len(), 2);

        let sub = Subspace::span(3, [v("111")]);
        let reps = quotient_reps(&sub, &Subspace::full(3)).unwrap();
        assert_eq!(reps.len(), 2);
        // cosets of span{111} in F2^3: four of them, each of size two
        for r in &reps {
            assert!(!sub.contains(r));
        }
        assert!(!sub.contains(&(&reps[0] + &reps[1])));
    }

    #[test]
    fn quotient_requires_containment() {
        let sub = Subspace::span(3, [v("001")]);
        let whole = Subspace::span(3, [v("100")]);
        assert!(matches!(
            quotient_reps(&sub, &whole),
            Err(Error::NotContained(_))
        ));
    }

    #[test]
    fn subspace_equality_is_representation_equality() {
        let a = Subspace::span(4, [v("1100"), v("0110")]);
        let b = Subspace::span(4, [v("1010"), v("0110"), v("1100")]);
        assert_eq!(a, b);
    }

    #[test]
    fn subquotient_coordinates() {
        let cycles = Subspace::span(4, [v("1000"), v("0100"), v("0010")]);
        let boundaries = Subspace::span(4, [v("1100")]);
        let sq = Subquotient::new(cycles, boundaries).unwrap();
        assert_eq!(sq.dim(), 2);
        let c = sq.coords(&v("1010")).unwrap();
        let back = sq.lift(&c);
        assert!(sq.boundaries().contains(&(&back + &v("1010"))));
        assert!(sq.coords(&v("0001")).is_none());
        assert!(sq.coords(&v("1100")).unwrap().is_zero());
    }

    #[test]
    fn bitvec_ops() {
        let a = v("1011");
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(a.first_one(), Some(0));
        assert_eq!(a.count_ones(), 3);
        assert_eq!(a.concat(&v("01")), v("101101"));
        assert_eq!(a.slice(1, 3), v("011"));
        let long = BitVec::unit(130, 129);
        assert_eq!(long.first_one(), Some(129));
        assert_eq!(long.ones().collect::<Vec<_>>(), vec![129]);
    }

    #[test]
    fn multiply_and_transpose() {
        let a = m(&["110", "011"]);
        let t = a.transpose();
        assert_eq!(t, m(&["10", "11", "01"]));
        assert_eq!(a.mul(&t), m(&["01", "10"]));
        assert_eq!(BitMatrix::from_columns(2, &[v("10"), v("11"), v("01")]), a);
    }
}
