//! Implicit-shift QL iteration for symmetric tridiagonal matrices.
//!
//! Used twice: Golub–Welsch quadrature (eigenvalues plus the first component
//! of every normalized eigenvector) and the Hermitian eigenvalue problem of
//! the Monte Carlo sampler after reduction to real tridiagonal form.

use alloc::vec::Vec;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Diagonalizes the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples rows `i` and `i+1`; `off.len()` must
/// be `diag.len() - 1`, or `diag.len()` with the last entry ignored).
///
/// On return `diag` holds the eigenvalues in ascending order. If `first_row`
/// is given it must start as `e_1` (or any vector to be rotated); it ends up
/// holding the first components of the eigenvectors, in the same order as
/// the eigenvalues.
pub fn symmetric_tridiagonal_ql(
    diag: &mut [f64],
    off: &mut [f64],
    mut first_row: Option<&mut [f64]>,
) -> Result<()> {
    let n = diag.len();
    assert!(off.len() + 1 >= n, "off-diagonal too short");
    if let Some(z) = first_row.as_deref() {
        assert_eq!(z.len(), n, "eigenvector row length");
    }
    if n <= 1 {
        return Ok(());
    }
    // work on a copy padded with a trailing zero
    let mut e = Vec::with_capacity(n);
    e.extend_from_slice(&off[..n - 1]);
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps == MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: sweeps,
                });
            }
            sweeps += 1;

            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = diag[m] - diag[l] + e[l] / (g + libm::copysign(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = first_row.as_deref_mut() {
                    let f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // selection sort keeps the pairing with the eigenvector row
    for i in 0..n - 1 {
        let mut k = i;
        for j in i + 1..n {
            if diag[j] < diag[k] {
                k = j;
            }
        }
        if k != i {
            diag.swap(i, k);
            if let Some(z) = first_row.as_deref_mut() {
                z.swap(i, k);
            }
        }
    }
    Ok(())
}
