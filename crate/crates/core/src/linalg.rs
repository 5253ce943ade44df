//! Dense complex vectors/matrices and the real-valued embedding used to
//! recast complex arithmetic as real arithmetic.
//!
//! Everything here is plain row-major `f64` storage; the sizes involved
//! (at most a few hundred rows/columns) do not justify a BLAS dependency.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    pub(crate) entries: Vec<Complex64>,
}

impl ComplexVector {
    /// Builds a vector, rejecting empty or non-finite input.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch("empty vector".into()));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("vector entry".into()));
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_raw(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            entries: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    /// Squared Euclidean norm.
    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

impl std::ops::Deref for ComplexVector {
    type Target = [Complex64];
    fn deref(&self) -> &[Complex64] {
        &self.entries
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} with {} entries",
                rows,
                cols,
                entries.len()
            )));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entry".into()));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }
}

/// Standard complex matrix-vector product `A x`.
pub fn matvec(a: &ComplexMatrix, x: &ComplexVector) -> Result<ComplexVector> {
    if a.cols != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "matvec: {}x{} matrix with length-{} vector",
            a.rows,
            a.cols,
            x.len()
        )));
    }
    let mut out = Vec::with_capacity(a.rows);
    for r in 0..a.rows {
        let mut acc = Complex64::new(0.0, 0.0);
        for (aij, xj) in a.row(r).iter().zip(x.as_slice()) {
            acc += aij * xj;
        }
        out.push(acc);
    }
    Ok(ComplexVector::from_raw(out))
}

/// Adjoint product `A^H x`.
pub fn adjoint_matvec(a: &ComplexMatrix, x: &ComplexVector) -> Result<ComplexVector> {
    if a.rows != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "adjoint_matvec: {}x{} matrix with length-{} vector",
            a.rows,
            a.cols,
            x.len()
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.cols];
    for r in 0..a.rows {
        let xr = x[r];
        for (c, aij) in a.row(r).iter().enumerate() {
            out[c] += aij.conj() * xr;
        }
    }
    Ok(ComplexVector::from_raw(out))
}

/// Inner product `a^H b`.
pub fn cdot(a: &ComplexVector, b: &ComplexVector) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "cdot: lengths {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (ai, bi) in a.as_slice().iter().zip(b.as_slice()) {
        acc += ai.conj() * bi;
    }
    Ok(acc)
}

/// Gram matrix `A^H A`. Only the upper triangle is computed; the lower
/// triangle is mirrored, so the result is Hermitian by construction.
pub fn gram(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.cols;
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..a.rows {
                acc += a.get(r, i).conj() * a.get(r, j);
            }
            if i == j {
                g.set(i, i, Complex64::new(acc.re, 0.0));
            } else {
                g.set(i, j, acc);
                g.set(j, i, acc.conj());
            }
        }
    }
    g
}

/// Dense row-major real matrix; the matrix half of the real embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// `A x` for a real vector.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "real matvec: {}x{} matrix with length-{} vector",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), x)).collect())
    }

    /// `A^T x` for a real vector.
    pub fn matvec_transposed(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "real transposed matvec: {}x{} matrix with length-{} vector",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let xr = x[r];
            for (o, aij) in out.iter_mut().zip(self.row(r)) {
                *o += aij * xr;
            }
        }
        Ok(out)
    }
}

/// Real dot product with four accumulators so the FP reduction is not a
/// single serial dependency chain. The split is fixed, which keeps results
/// identical across calls and thread counts.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for k in 0..chunks {
        let i = 4 * k;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    for i in 4 * chunks..a.len() {
        acc[0] += a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3])
}

/// Real embedding of a complex matrix: `[[Re, -Im], [Im, Re]]`.
pub fn embed_matrix(h: &ComplexMatrix) -> RealMatrix {
    let (r, c) = (h.rows, h.cols);
    let mut m = RealMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = h.get(i, j);
            m.entries[i * 2 * c + j] = z.re;
            m.entries[i * 2 * c + (c + j)] = -z.im;
            m.entries[(r + i) * 2 * c + j] = z.im;
            m.entries[(r + i) * 2 * c + (c + j)] = z.re;
        }
    }
    m
}

/// Real embedding of a complex vector: `[Re; Im]` stacking.
pub fn embed_vector(x: &ComplexVector) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; 2 * n];
    for (i, z) in x.as_slice().iter().enumerate() {
        out[i] = z.re;
        out[n + i] = z.im;
    }
    out
}

/// Inverse of [`embed_vector`]: entry `b` becomes `x[b] + j x[b + len]`.
pub fn lift_vector(xr: &[f64], len: usize) -> Result<ComplexVector> {
    if xr.len() != 2 * len {
        return Err(Error::DimensionMismatch(format!(
            "lift_vector: {} reals cannot form {} complex entries",
            xr.len(),
            len
        )));
    }
    Ok(ComplexVector::from_raw(
        (0..len)
            .map(|b| Complex64::new(xr[b], xr[len + b]))
            .collect(),
    ))
}
