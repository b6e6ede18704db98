//! Small dense complex linear algebra helpers shared by the physics modules.
//!
//! Everything here operates on `nalgebra` dynamic matrices of `Complex64`;
//! the Hilbert spaces in this crate are tiny (dim ≤ ~30), so dense
//! Hermitian eigendecomposition is always the right tool.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, SimError};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Max-norm of the anti-Hermitian part, `max |M - M†|`.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Elementwise max-norm of the difference of two matrices.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns `(eigenvalues ascending, eigenvectors as columns)`. Errors if the
/// input is not Hermitian to within `1e-10` (this always indicates a bug
/// upstream, not bad user input).
pub fn hermitian_eigen(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let defect = hermiticity_defect(m);
    if defect > 1e-10 {
        return Err(SimError::Invariant(format!(
            "hermitian_eigen called on non-Hermitian matrix (defect {defect:e})"
        )));
    }
    // Symmetrize to kill roundoff before factorizing.
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.nrows();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((vals, vecs))
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.0)
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues slightly negative from roundoff are clamped to zero.
pub fn psd_sqrt(m: &CMat) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let n = m.nrows();
    let mut d = CMat::zeros(n, n);
    for (k, &v) in vals.iter().enumerate() {
        if v < -1e-9 {
            return Err(SimError::Invariant(format!(
                "psd_sqrt: eigenvalue {v:e} is too negative"
            )));
        }
        d[(k, k)] = c(v.max(0.0).sqrt());
    }
    Ok(&vecs * d * vecs.adjoint())
}

/// Kronecker product with the second factor as the fast index.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}
