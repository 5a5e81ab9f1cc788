//! Dense linear algebra over a prime field `F_p`.
//!
//! Everything downstream (kernels, cokernels, hom spaces, homotopy solving)
//! reduces to the routines here, so they are fully deterministic: elimination
//! always pivots on the smallest available row index, scanning columns left
//! to right, and free variables are set to zero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_PRIME: u64 = 1 << 31;

/// The prime field `F_p` with `2 <= p <= 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// `(-1)^k` as a residue.
    pub fn sign(self, k: i64) -> u64 {
        if k.rem_euclid(2) == 0 {
            1
        } else {
            self.p - 1
        }
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[F_{}; {}x{}](", self.field.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, ")")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = u64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &u64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from row-major residues. Entries are reduced mod `p`.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|v| v % field.p).collect();
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from signed rows; all rows must share a length.
    pub fn from_rows<R: AsRef<[i64]>>(field: PrimeField, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend(r.as_ref().iter().map(|&v| field.reduce(v)));
        }
        Self {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// A single column vector.
    pub fn column(field: PrimeField, v: &[u64]) -> Self {
        Self {
            field,
            rows: v.len(),
            cols: 1,
            data: v.iter().map(|x| x % field.p).collect(),
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|r| (0..self.cols).all(|c| self[(r, c)] == u64::from(r == c)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let f = self.field;
        let p = f.p;
        let mut out = Mat::zeros(f, self.rows, rhs.cols);
        for r in 0..self.rows {
            let orow = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = (*o + a * b) % p;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in add");
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sub");
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.field.p - 1)
    }

    pub fn scale(&self, s: u64) -> Mat {
        let f = self.field;
        let s = s % f.p;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Mat::zeros(self.field, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out[(r, k)] = self[(r, c)];
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            out.data[k * self.cols..(k + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    pub fn hstack(field: PrimeField, rows: usize, parts: &[&Mat]) -> Mat {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut c0 = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        out
    }

    pub fn vstack(field: PrimeField, cols: usize, parts: &[&Mat]) -> Mat {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut r0 = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        out
    }

    /// Block-diagonal matrix with the given blocks.
    pub fn block_diag(field: PrimeField, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|m| m.rows).sum();
        let cols = blocks.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Column-major flattening, the `vec` operator.
    pub fn vec(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self[(r, c)]);
            }
        }
        out
    }

    /// Inverse of `vec`.
    pub fn unvec(field: PrimeField, rows: usize, cols: usize, v: &[u64]) -> Mat {
        assert_eq!(v.len(), rows * cols);
        let mut out = Mat::zeros(field, rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                out[(r, c)] = v[c * rows + r];
            }
        }
        out
    }

    /// Reduced row echelon form. Returns the reduced matrix and its pivot
    /// columns. Pivots are chosen on the smallest row index with a nonzero
    /// entry in the current column.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Row-reduces in place, only choosing pivots among the first
    /// `pivot_cols` columns. Returns the pivot columns.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let f = self.field;
        let p = f.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for k in 0..cols {
                    self.data.swap(piv * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            if inv != 1 {
                for k in c..cols {
                    let v = &mut self.data[r * cols + k];
                    *v = (*v * inv) % p;
                }
            }
            let (head, tail) = self.data.split_at_mut(r * cols);
            let (prow, rest) = tail.split_at_mut(cols);
            for row in head.chunks_exact_mut(cols).chain(rest.chunks_exact_mut(cols)) {
                let factor = row[c];
                if factor == 0 {
                    continue;
                }
                let nf = p - factor;
                for k in c..cols {
                    let b = prow[k];
                    if b != 0 {
                        row[k] = (row[k] + nf * b) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// Pivot columns of the reduced row echelon form, i.e. the lexicographically
    /// first set of linearly independent columns.
    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Inverse of a square invertible matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let id = Mat::identity(self.field, n);
        let mut aug = Mat::hstack(self.field, n, &[self, &id]);
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return None;
        }
        Some(aug.block(0, n, n, n))
    }
}

/// Rank over `F_p`.
pub fn rank(a: &Mat) -> usize {
    if a.rows == 0 || a.cols == 0 {
        return 0;
    }
    let mut m = a.clone();
    m.rref_in_place(a.cols).len()
}

/// Basis of the null space, one column per free variable in increasing order.
///
/// Column count is `cols - rank(a)`.
pub fn kernel_basis(a: &Mat) -> Mat {
    let f = a.field;
    let (r, pivots) = a.rref();
    let mut is_pivot = vec![false; a.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..a.cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = Mat::zeros(f, a.cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        out[(fc, k)] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            out[(pc, k)] = f.neg(r[(row, fc)]);
        }
    }
    out
}

/// Solves `a * x = b`. Free variables are zero; `None` when inconsistent.
pub fn solve(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "solve: lhs has {} rows, rhs has {}",
            a.rows, b.rows
        )));
    }
    let f = a.field;
    let n = a.cols;
    let mut aug = Mat::hstack(f, a.rows, &[a, b]);
    let pivots = aug.rref_in_place(n);
    let rk = pivots.len();
    for row in rk..aug.rows {
        if aug.row(row)[n..].iter().any(|&v| v != 0) {
            return Ok(None);
        }
    }
    let mut x = Mat::zeros(f, n, b.cols);
    for (row, &pc) in pivots.iter().enumerate() {
        for k in 0..b.cols {
            x[(pc, k)] = aug[(row, n + k)];
        }
    }
    Ok(Some(x))
}

/// Left inverse `r` of an injective matrix `a`, so that `r * a = 1`.
///
/// Chosen as the canonical solution of `a^T r^T = 1`, which supports `r` on
/// the pivot rows of `a`.
pub fn split_mono_retraction(a: &Mat) -> Result<Mat> {
    if rank(a) != a.cols {
        return Err(Error::NotMono(format!(
            "{}x{} matrix has rank {}",
            a.rows,
            a.cols,
            rank(a)
        )));
    }
    let id = Mat::identity(a.field, a.cols);
    let rt = solve(&a.transpose(), &id)?.expect("full column rank implies solvable");
    Ok(rt.transpose())
}

/// Right inverse `s` of a surjective matrix `a`, so that `a * s = 1`.
pub fn split_epi_section(a: &Mat) -> Result<Mat> {
    let id = Mat::identity(a.field, a.rows);
    solve(a, &id)?.ok_or_else(|| Error::NotEpi(format!("{}x{} matrix has rank {}", a.rows, a.cols, rank(a))))
}

/// Basis of the column space: the pivot columns of `a`.
pub fn column_space(a: &Mat) -> Mat {
    a.select_cols(&a.pivot_cols())
}

/// Indices of standard basis vectors completing the columns of `basis`
/// (assumed independent) to a basis of the ambient space, greedily by index.
pub fn complement_indices(basis: &Mat) -> Vec<usize> {
    let n = basis.rows;
    let id = Mat::identity(basis.field, n);
    let aug = Mat::hstack(basis.field, n, &[basis, &id]);
    aug.pivot_cols()
        .into_iter()
        .filter(|&c| c >= basis.cols)
        .map(|c| c - basis.cols)
        .collect()
}
