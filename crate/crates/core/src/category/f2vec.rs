//! Finite-dimensional vector spaces over F2 and the linear algebra the rest
//! of the crate needs: products, ranks, kernels and solving against a basis.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Category, CategoryTag, Enumerable, PullbackCone, Pullbacks};
use crate::error::{Error, Result};

/// Vector spaces `F2^n`, represented by their dimension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct F2Vec;

/// A bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn add_assign(&mut self, other: &F2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the highest set bit.
    pub fn pivot(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        let mut v = F2Vector::zeros(self.len + other.len);
        for i in self.ones() {
            v.set(i, true);
        }
        for i in other.ones() {
            v.set(self.len + i, true);
        }
        v
    }

    pub fn slice(&self, start: usize, end: usize) -> F2Vector {
        F2Vector::from_support(end - start, self.ones().filter(|&i| i >= start && i < end).map(|i| i - start))
    }
}

/// Incremental Gaussian elimination. Each stored vector carries a tag that
/// records which inputs were combined to produce it.
#[derive(Clone, Debug)]
pub struct Reducer {
    rows: Vec<(F2Vector, F2Vector)>,
    pivot_of: Vec<Option<usize>>,
    tag_len: usize,
}

impl Reducer {
    pub fn new(dim: usize, tag_len: usize) -> Self {
        Reducer { rows: Vec::new(), pivot_of: vec![None; dim], tag_len }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored basis, returning the residual and the
    /// sum of tags of the basis vectors used.
    pub fn reduce(&self, mut v: F2Vector) -> (F2Vector, F2Vector) {
        let mut tag = F2Vector::zeros(self.tag_len);
        while let Some(p) = v.pivot() {
            match self.pivot_of[p] {
                Some(r) => {
                    v.add_assign(&self.rows[r].0);
                    tag.add_assign(&self.rows[r].1);
                }
                None => break,
            }
        }
        (v, tag)
    }

    /// Inserts `v` tagged `tag`. Returns `None` if `v` was independent,
    /// otherwise the tag combination of the dependency `v + basis = 0`.
    pub fn insert(&mut self, v: F2Vector, tag: F2Vector) -> Option<F2Vector> {
        let (residual, used) = self.reduce(v);
        let mut combined = tag;
        combined.add_assign(&used);
        match residual.pivot() {
            None => Some(combined),
            Some(p) => {
                self.pivot_of[p] = Some(self.rows.len());
                self.rows.push((residual, combined));
                None
            }
        }
    }
}

/// A linear map `F2^cols -> F2^rows`, stored by columns.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Matrix {
    rows: usize,
    cols: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols: vec![F2Vector::zeros(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { rows: n, cols: (0..n).map(|i| F2Vector::unit(n, i)).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<F2Vector>) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::MapType(format!("column length differs from row count {rows}")));
        }
        Ok(F2Matrix { rows, cols })
    }

    /// Builds a matrix from row-major 0/1 entries.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Vec<u8>]) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::MapType(format!("entries do not form a {rows}x{cols} matrix")));
        }
        let mut m = F2Matrix::zero(rows, cols);
        for (i, row) in entries.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => m.cols[j].set(i, true),
                    _ => return Err(Error::MapType(format!("entry {e} is not 0 or 1"))),
                }
            }
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j].get(i)
    }

    pub fn column(&self, j: usize) -> &F2Vector {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[F2Vector] {
        &self.cols
    }

    pub fn apply(&self, v: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.rows);
        for j in v.ones() {
            out.add_assign(&self.cols[j]);
        }
        out
    }

    /// `self ∘ inner`.
    pub fn mul(&self, inner: &F2Matrix) -> F2Matrix {
        F2Matrix { rows: self.rows, cols: inner.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        let mut out = self.clone();
        for (a, b) in out.cols.iter_mut().zip(&other.cols) {
            a.add_assign(b);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut r = Reducer::new(self.rows, 0);
        for c in &self.cols {
            r.insert(c.clone(), F2Vector::zeros(0));
        }
        r.rank()
    }

    /// A basis of the null space.
    pub fn kernel(&self) -> Vec<F2Vector> {
        let n = self.n_cols();
        let mut r = Reducer::new(self.rows, n);
        self.cols
            .iter()
            .enumerate()
            .filter_map(|(j, c)| r.insert(c.clone(), F2Vector::unit(n, j)))
            .collect()
    }

    /// Coordinates of `w` in the column space, if `w` lies in it. Unique when
    /// the columns are independent.
    pub fn solve(&self, w: &F2Vector) -> Option<F2Vector> {
        let n = self.n_cols();
        let mut r = Reducer::new(self.rows, n);
        for (j, c) in self.cols.iter().enumerate() {
            r.insert(c.clone(), F2Vector::unit(n, j));
        }
        let (residual, tag) = r.reduce(w.clone());
        residual.is_zero().then_some(tag)
    }

    pub fn inverse(&self) -> Option<F2Matrix> {
        if self.rows != self.n_cols() {
            return None;
        }
        let n = self.rows;
        let cols = (0..n).map(|i| self.solve(&F2Vector::unit(n, i))).collect::<Option<Vec<_>>>()?;
        let inv = F2Matrix { rows: n, cols };
        (self.mul(&inv) == F2Matrix::identity(n)).then_some(inv)
    }

    /// Vertical stacking `[self; lower]` of maps with a common source.
    pub fn stack(&self, lower: &F2Matrix) -> F2Matrix {
        F2Matrix {
            rows: self.rows + lower.rows,
            cols: self.cols.iter().zip(&lower.cols).map(|(a, b)| a.concat(b)).collect(),
        }
    }

    fn to_entries(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| (0..self.n_cols()).map(|j| self.get(i, j) as u8).collect()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u8>>,
}

impl Serialize for F2Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixDoc { rows: self.rows, cols: self.n_cols(), entries: self.to_entries() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F2Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = MatrixDoc::deserialize(d)?;
        if doc.rows == 0 && doc.entries.is_empty() {
            return Ok(F2Matrix::zero(0, doc.cols));
        }
        F2Matrix::from_rows(doc.rows, doc.cols, &doc.entries).map_err(serde::de::Error::custom)
    }
}

impl Category for F2Vec {
    type Obj = usize;
    type Map = F2Matrix;

    const TAG: CategoryTag = CategoryTag::F2Vec;

    fn initial() -> usize {
        0
    }

    fn from_initial(target: &usize) -> F2Matrix {
        F2Matrix::zero(*target, 0)
    }

    fn identity(obj: &usize) -> F2Matrix {
        F2Matrix::identity(*obj)
    }

    fn compose(outer: &F2Matrix, inner: &F2Matrix) -> F2Matrix {
        outer.mul(inner)
    }

    fn check_map(map: &F2Matrix, source: &usize, target: &usize) -> Result<()> {
        if map.n_cols() != *source || map.n_rows() != *target {
            return Err(Error::MapType(format!(
                "{}x{} matrix used as a map {source}->{target}",
                map.n_rows(),
                map.n_cols()
            )));
        }
        Ok(())
    }

    fn is_mono(map: &F2Matrix) -> bool {
        map.rank() == map.n_cols()
    }
}

impl Enumerable for F2Vec {
    fn hom_size(source: &usize, target: &usize) -> u128 {
        let bits = source * target;
        if bits >= 128 {
            u128::MAX
        } else {
            1u128 << bits
        }
    }

    fn all_maps(source: &usize, target: &usize) -> Vec<F2Matrix> {
        let (c, r) = (*source, *target);
        let bits = r * c;
        assert!(bits < 32, "hom-set of {r}x{c} matrices is too large to enumerate");
        (0u64..(1u64 << bits))
            .map(|code| {
                let cols = (0..c)
                    .map(|j| F2Vector::from_support(r, (0..r).filter(|&i| (code >> (j * r + i)) & 1 == 1)))
                    .collect();
                F2Matrix { rows: r, cols }
            })
            .collect()
    }
}

/// Basis of `{(x, b) : f x = h b}` inside `x ⊕ b`, stored as the columns of
/// the inclusion matrix.
#[derive(Clone, Debug)]
pub struct KernelCone {
    pub inclusion: F2Matrix,
}

impl Pullbacks for F2Vec {
    type ConeData = KernelCone;

    fn pullback(f: &F2Matrix, h: &F2Matrix, x: &usize, b: &usize) -> PullbackCone<F2Vec> {
        let side_by_side = F2Matrix { rows: f.n_rows(), cols: f.cols.iter().chain(&h.cols).cloned().collect() };
        let basis = side_by_side.kernel();
        let k = basis.len();
        let inclusion = F2Matrix { rows: x + b, cols: basis };
        let to_x = F2Matrix { rows: *x, cols: inclusion.cols.iter().map(|v| v.slice(0, *x)).collect() };
        let to_b = F2Matrix { rows: *b, cols: inclusion.cols.iter().map(|v| v.slice(*x, x + b)).collect() };
        debug_assert_eq!(to_x.n_cols(), k);
        PullbackCone { apex: k, to_x, to_b, data: KernelCone { inclusion } }
    }

    fn lift(cone: &PullbackCone<F2Vec>, u: &F2Matrix, v: &F2Matrix, t: &usize) -> Result<F2Matrix> {
        let paired = u.stack(v);
        let cols = (0..*t)
            .map(|j| {
                cone.data
                    .inclusion
                    .solve(paired.column(j))
                    .ok_or_else(|| Error::MapType("pair does not land in the fiber product".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(F2Matrix { rows: cone.apex, cols })
    }
}
