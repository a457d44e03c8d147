//! Dense numerical linear algebra with explicit rank tolerances.
//!
//! Everything downstream of the SDP hinges on consistent rank decisions, so
//! this module funnels every rank question through [`numeric_rank`] /
//! [`nullspace_basis`] with a single [`RankTolerance`] that the solver
//! threads through from its configuration. Small matrices go through a full
//! singular value decomposition; large ones are first row-compressed by a
//! blocked Householder QR (in GEMM-sized panels) and the spectrum is then
//! read off the Gram matrix, which computes the same singular values.

mod eig;
mod mat;
mod qr;
mod rank;
mod rref;
mod schur;

pub use eig::symmetric_eig;
pub use mat::DenseMatrix;
pub use qr::qr_row_compress;
pub use rank::{
    nullspace_basis, numeric_rank, row_space_basis, singular_values, RankDecision, RankTolerance,
};
pub use rref::rref_partial_pivot;
pub use schur::{clustered_schur, SchurCluster};

/// Least-squares solve `min ||A x - b||` via SVD, returning the minimum-norm
/// solution and the residual norm. Intended for the small systems that arise
/// in border-basis construction.
pub fn lstsq(a: &DenseMatrix, b: &[f64], tol: &RankTolerance) -> (Vec<f64>, f64) {
    assert_eq!(a.rows, b.len());
    let na = a.to_nalgebra();
    let svd = na.svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with vt");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0f64, f64::max);
    let tau = tol.threshold(smax, a.rows.max(a.cols));
    let mut x = vec![0.0; a.cols];
    for k in 0..sigma.len() {
        if sigma[k] <= tau {
            continue;
        }
        let mut utb = 0.0;
        for i in 0..a.rows {
            utb += u[(i, k)] * b[i];
        }
        let coef = utb / sigma[k];
        for j in 0..a.cols {
            x[j] += coef * vt[(k, j)];
        }
    }
    let mut resid: f64 = 0.0;
    for i in 0..a.rows {
        let mut ax = 0.0;
        for j in 0..a.cols {
            ax += a.get(i, j) * x[j];
        }
        resid += (ax - b[i]) * (ax - b[i]);
    }
    (x, resid.sqrt())
}
