//! Dense complex matrices and Hermitian spectral helpers over faer.

use faer::{Mat, Side};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex matrix, row-major semantics through `get`/`set`.
#[derive(Clone, Debug)]
pub struct CMatrix {
    inner: Mat<C64>,
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { inner: Mat::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { inner: Mat::from_fn(rows, cols, f) }
    }

    pub fn from_real_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(rows, cols, |i, j| C64::new(f(i, j), 0.0))
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Build from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_real_fn(n, m, |i, j| rows[i][j])
    }

    /// |ψ⟩⟨ψ|
    pub fn outer(psi: &[C64]) -> Self {
        let n = psi.len();
        Self::from_fn(n, n, |i, j| psi[i] * psi[j].conj())
    }

    pub fn nrows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.inner[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.inner[(i, j)] = v;
    }

    pub fn adjoint(&self) -> Self {
        Self { inner: self.inner.adjoint().to_owned() }
    }

    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.ncols(), other.nrows(), "matmul shape mismatch");
        Self { inner: &self.inner * &other.inner }
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.ncols(), v.len());
        let mut out = vec![C64::new(0.0, 0.0); self.nrows()];
        for j in 0..self.ncols() {
            let vj = v[j];
            if vj == C64::new(0.0, 0.0) {
                continue;
            }
            let col = self.inner.col(j);
            for (i, o) in out.iter_mut().enumerate() {
                *o += col[i] * vj;
            }
        }
        out
    }

    /// A† v
    pub fn adjoint_matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.nrows(), v.len());
        (0..self.ncols())
            .map(|j| {
                let col = self.inner.col(j);
                let mut acc = C64::new(0.0, 0.0);
                for (i, vi) in v.iter().enumerate() {
                    acc += col[i].conj() * vi;
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(self.nrows(), self.ncols(), |i, j| self.get(i, j) * s)
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self::from_fn(self.nrows(), self.ncols(), |i, j| self.get(i, j) * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.nrows().min(self.ncols())).map(|i| self.get(i, i)).sum()
    }

    pub fn diag_real(&self) -> Vec<f64> {
        (0..self.nrows().min(self.ncols())).map(|i| self.get(i, i).re).collect()
    }

    /// Re Tr(A B) without forming the product.
    pub fn trace_product_re(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.ncols(), other.nrows());
        assert_eq!(self.nrows(), other.ncols());
        let mut acc = 0.0;
        for i in 0..self.nrows() {
            for k in 0..self.ncols() {
                let a = self.get(i, k);
                let b = other.get(k, i);
                acc += a.re * b.re - a.im * b.im;
            }
        }
        acc
    }

    /// ⟨ψ|A|ψ⟩ (real part).
    pub fn expectation(&self, psi: &[C64]) -> f64 {
        let av = self.matvec(psi);
        psi.iter().zip(av.iter()).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// (A + A†)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.nrows(), self.ncols(), |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for j in 0..self.ncols() {
            for i in 0..self.nrows() {
                m = m.max(self.get(i, j).norm());
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.nrows(), other.nrows());
        assert_eq!(self.ncols(), other.ncols());
        let mut m: f64 = 0.0;
        for j in 0..self.ncols() {
            for i in 0..self.nrows() {
                m = m.max((self.get(i, j) - other.get(i, j)).norm());
            }
        }
        m
    }

    /// max |A − A†|
    pub fn hermiticity_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.nrows() {
            for j in 0..=i {
                m = m.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        m
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        for j in 0..self.ncols() {
            for i in 0..self.nrows() {
                if i != j && self.get(i, j).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn kron(a: &CMatrix, b: &CMatrix) -> Self {
        let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
        Self::from_fn(ar * br, ac * bc, |i, j| a.get(i / br, j / bc) * b.get(i % br, j % bc))
    }

    /// Tr_B of an operator on A⊗B with dims (d_a, d_b).
    pub fn partial_trace_b(&self, d_a: usize, d_b: usize) -> Self {
        assert_eq!(self.nrows(), d_a * d_b);
        Self::from_fn(d_a, d_a, |i, j| (0..d_b).map(|k| self.get(i * d_b + k, j * d_b + k)).sum())
    }

    /// Tr_A of an operator on A⊗B with dims (d_a, d_b).
    pub fn partial_trace_a(&self, d_a: usize, d_b: usize) -> Self {
        assert_eq!(self.nrows(), d_a * d_b);
        Self::from_fn(d_b, d_b, |i, j| (0..d_a).map(|k| self.get(k * d_b + i, k * d_b + j)).sum())
    }

    /// Eigendecomposition of the Hermitian part.
    pub fn eigh(&self) -> Result<Spectrum> {
        assert!(self.is_square(), "eigh of non-square matrix");
        let n = self.nrows();
        if n == 0 {
            return Ok(Spectrum { values: vec![], vectors: CMatrix::zeros(0, 0) });
        }
        let h = self.hermitian_part();
        let evd = h
            .inner
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
        let s = evd.S().column_vector();
        let values: Vec<f64> = (0..n).map(|i| s[i].re).collect();
        let u = evd.U();
        let vectors = CMatrix::from_fn(n, n, |i, j| u[(i, j)]);
        Ok(Spectrum { values, vectors })
    }

    /// Eigenvalues only (ascending) of the Hermitian part.
    pub fn eigvalsh(&self) -> Result<Vec<f64>> {
        let n = self.nrows();
        if n == 0 {
            return Ok(vec![]);
        }
        let h = self.hermitian_part();
        let vals = h
            .inner
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Numerical(format!("eigenvalue computation failed: {e:?}")))?;
        Ok(vals)
    }

    pub fn raw(&self) -> &Mat<C64> {
        &self.inner
    }
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// U diag(f(λ)) U† with real f.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let fv: Vec<C64> = self.values.iter().map(|&v| C64::new(f(v), 0.0)).collect();
        self.reconstruct_complex(&fv)
    }

    /// U diag(w) U† with complex weights.
    pub fn reconstruct_complex(&self, w: &[C64]) -> CMatrix {
        let n = self.dim();
        let scaled = CMatrix::from_fn(n, n, |i, k| self.vectors.get(i, k) * w[k]);
        scaled.matmul(&self.vectors.adjoint())
    }

    /// Diagonal of U diag(w) U† without forming the matrix.
    pub fn diag_of(&self, w: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (k, &wk) in w.iter().enumerate() {
            if wk == 0.0 {
                continue;
            }
            let col = self.vectors.inner.col(k);
            for (i, o) in out.iter_mut().enumerate() {
                *o += col[i].norm_sqr() * wk;
            }
        }
        out
    }

    /// Column k as an owned vector.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.dim()).map(|i| self.vectors.get(i, k)).collect()
    }

    /// ⟨v_k|A|v_k⟩ for every eigenvector, for Hermitian A.
    pub fn diagonal_in_basis(&self, a: &CMatrix) -> Vec<f64> {
        let av = a.matmul(&self.vectors);
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut acc = 0.0;
                for i in 0..n {
                    acc += (self.vectors.get(i, k).conj() * av.get(i, k)).re;
                }
                acc
            })
            .collect()
    }

    /// |⟨v_k|ψ⟩|² for every eigenvector.
    pub fn weights_of_pure(&self, psi: &[C64]) -> Vec<f64> {
        self.vectors.adjoint_matvec(psi).iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|v| v)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix { inner: &self.inner + &rhs.inner }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix { inner: &self.inner - &rhs.inner }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Σ_i |v_i|²
pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub fn normalize(v: &mut [C64]) {
    let n = norm_sqr(v).sqrt();
    if n > 0.0 {
        for c in v.iter_mut() {
            *c /= n;
        }
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]])
}

/// Solve H x = g for a real symmetric positive-semidefinite H, discarding
/// directions whose eigenvalue is below `rel_cut`·λ_max.
pub fn sym_psd_solve(h: &[Vec<f64>], g: &[f64], rel_cut: f64) -> Result<Vec<f64>> {
    let n = g.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let m = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (h[i][j] + h[j][i]));
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigendecomposition failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let lmax = (0..n).map(|i| s[i].abs()).fold(0.0, f64::max);
    let mut x = vec![0.0; n];
    for k in 0..n {
        let lk = s[k];
        if lk <= rel_cut * lmax {
            continue;
        }
        let proj: f64 = (0..n).map(|i| u[(i, k)] * g[i]).sum();
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += u[(i, k)] * proj / lk;
        }
    }
    Ok(x)
}

/// Eigendecomposition of a real symmetric matrix: ascending values and
/// column eigenvectors as rows-of-columns `vectors[i][k]`.
pub fn sym_eigh(a: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.len();
    let m = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (a[i][j] + a[j][i]));
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigendecomposition failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let values = (0..n).map(|i| s[i]).collect();
    let vectors = (0..n).map(|i| (0..n).map(|k| u[(i, k)]).collect()).collect();
    Ok((values, vectors))
}
