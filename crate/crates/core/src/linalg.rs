//! Small dense complex linear algebra: Householder QR with explicit thin Q,
//! and Hermitian eigenvalues through tridiagonal reduction.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Result;
use crate::tridiag::symmetric_tridiagonal_ql;

/// Column-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from column-major data.
    pub fn from_column_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn column_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Copy of the `rows x cols` block starting at `(row0, col0)`.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        assert!(
            row0 + rows <= self.rows && col0 + cols <= self.cols,
            "block out of range"
        );
        let mut out = Self::zeros(rows, cols);
        for j in 0..cols {
            out.column_mut(j)
                .copy_from_slice(&self.column(col0 + j)[row0..row0 + rows]);
        }
        out
    }

    /// `self^H self`.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut g = Self::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v: Complex64 = self
                    .column(i)
                    .iter()
                    .zip(self.column(j))
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                g[(i, j)] = v;
                g[(j, i)] = v.conj();
            }
        }
        g
    }

    /// `self self^H`.
    pub fn outer_gram(&self) -> Self {
        let n = self.rows;
        let mut g = Self::zeros(n, n);
        for k in 0..self.cols {
            let col = self.column(k);
            for j in 0..n {
                let cj = col[j].conj();
                for i in j..n {
                    g[(i, j)] += col[i] * cj;
                }
            }
        }
        for j in 0..n {
            g[(j, j)].im = 0.0;
            for i in j + 1..n {
                g[(j, i)] = g[(i, j)].conj();
            }
        }
        g
    }

    /// `max |(self^H self - I)_{ij}|`.
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.gram();
        let mut worst = 0.0f64;
        for j in 0..g.cols {
            for i in 0..g.rows {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).norm());
            }
        }
        worst
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[j * self.rows + i]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[j * self.rows + i]
    }
}

/// Householder reflector `I - tau v v^H` mapping `x` to `alpha e_1`, with
/// `alpha = -e^{i arg x_0} |x|`. Returns `(v, tau, alpha)`; `tau = 0` when
/// `x` is already zero.
fn reflector(x: &[Complex64]) -> (Vec<Complex64>, f64, Complex64) {
    let norm = libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>());
    let mut v = x.to_vec();
    if norm == 0.0 {
        return (v, 0.0, Complex64::new(0.0, 0.0));
    }
    let x0 = x[0];
    let phase = if x0.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        x0 / x0.norm()
    };
    let alpha = -phase * norm;
    v[0] -= alpha;
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (v, 2.0 / vv, alpha)
}

/// Applies `I - tau v v^H` to rows `offset..` of every column of `target`
/// from `col0` on.
fn apply_reflector(v: &[Complex64], tau: f64, target: &mut CMatrix, offset: usize, col0: usize) {
    if tau == 0.0 {
        return;
    }
    for j in col0..target.cols {
        let col = &mut target.column_mut(j)[offset..];
        let s: Complex64 = v.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
        let s = s * tau;
        for (c, vi) in col.iter_mut().zip(v) {
            *c -= vi * s;
        }
    }
}

/// Householder QR of an `m x k` matrix (`k <= m`). Returns the thin `Q`
/// (`m x k`, orthonormal columns) and the diagonal of `R`.
pub fn householder_qr(mut a: CMatrix) -> (CMatrix, Vec<Complex64>) {
    let (m, k) = (a.rows, a.cols);
    assert!(k <= m, "thin QR needs at least as many rows as columns");
    let mut reflectors = Vec::with_capacity(k);
    let mut r_diag = Vec::with_capacity(k);
    for j in 0..k {
        let (v, tau, alpha) = reflector(&a.column(j)[j..]);
        apply_reflector(&v, tau, &mut a, j, j + 1);
        r_diag.push(if tau == 0.0 { a.column(j)[j] } else { alpha });
        reflectors.push((v, tau));
    }
    let mut q = CMatrix::zeros(m, k);
    for i in 0..k {
        q[(i, i)] = Complex64::new(1.0, 0.0);
    }
    for (j, (v, tau)) in reflectors.iter().enumerate().rev() {
        apply_reflector(v, *tau, &mut q, j, j);
    }
    (q, r_diag)
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is
/// read.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    let n = a.rows;
    assert_eq!(n, a.cols, "matrix must be square");
    let mut w = a.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(1) {
        let x: Vec<Complex64> = w.column(k)[k + 1..].to_vec();
        let (v, tau, alpha) = reflector(&x);
        if tau != 0.0 {
            // trailing block update A <- A - v q^H - q v^H
            let len = n - k - 1;
            let mut p = vec![Complex64::new(0.0, 0.0); len];
            for (jj, &vj) in v.iter().enumerate() {
                let col = &w.column(k + 1 + jj)[k + 1..];
                for (pi, c) in p.iter_mut().zip(col) {
                    *pi += c * vj;
                }
            }
            for pi in p.iter_mut() {
                *pi *= tau;
            }
            let vp: Complex64 = v.iter().zip(&p).map(|(a, b)| a.conj() * b).sum();
            let kk = 0.5 * tau * vp.re;
            let q: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kk).collect();
            for jj in 0..len {
                let (vj, qj) = (v[jj].conj(), q[jj].conj());
                let col = &mut w.column_mut(k + 1 + jj)[k + 1..];
                for ii in 0..len {
                    col[ii] -= v[ii] * qj + q[ii] * vj;
                }
            }
        }
        diag[k] = w[(k, k)].re;
        off[k] = if tau == 0.0 {
            w[(k + 1, k)].norm()
        } else {
            alpha.norm()
        };
    }
    if n > 0 {
        diag[n - 1] = w[(n - 1, n - 1)].re;
    }
    symmetric_tridiagonal_ql(&mut diag, &mut off, None)?;
    Ok(diag)
}
