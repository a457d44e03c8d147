//! Symmetric eigendecomposition.

use super::mat::DenseMatrix;
use crate::error::{Error, Result};

/// Eigendecomposition of a symmetric matrix: eigenvalues ascending with the
/// matching orthonormal eigenvectors as columns. Rejects inputs that are not
/// symmetric within `1e-10` relative.
pub fn symmetric_eig(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    if a.rows != a.cols {
        return Err(Error::NotSymmetric(f64::INFINITY));
    }
    let asym = a.max_asymmetry();
    if asym > 1e-10 * (1.0 + a.max_abs()) {
        return Err(Error::NotSymmetric(asym));
    }
    let (vals, vecs) = symmetric_eig_unchecked(a, true)?;
    Ok((vals, vecs.expect("eigenvectors requested")))
}

/// Internal variant: symmetrizes silently and optionally skips eigenvectors.
pub(crate) fn symmetric_eig_unchecked(
    a: &DenseMatrix,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<DenseMatrix>)> {
    let n = a.rows;
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| DenseMatrix::zeros(0, 0))));
    }
    let mut na = a.to_nalgebra();
    // fold in the lower triangle so roundoff asymmetry cannot bias QL
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (na[(i, j)] + na[(j, i)]);
            na[(i, j)] = v;
            na[(j, i)] = v;
        }
    }
    if want_vectors {
        let eig = nalgebra::SymmetricEigen::try_new(na, f64::EPSILON, 0)
            .ok_or_else(|| Error::EigFailure(format!("no convergence on {}x{}", n, n)))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            eig.eigenvalues[i]
                .partial_cmp(&eig.eigenvalues[j])
                .unwrap()
        });
        let mut vals = Vec::with_capacity(n);
        let mut vecs = DenseMatrix::zeros(n, n);
        for (c, &idx) in order.iter().enumerate() {
            vals.push(eig.eigenvalues[idx]);
            for r in 0..n {
                vecs.set(r, c, eig.eigenvectors[(r, idx)]);
            }
        }
        Ok((vals, Some(vecs)))
    } else {
        let vals_na = na
            .symmetric_eigenvalues();
        let mut vals: Vec<f64> = vals_na.iter().cloned().collect();
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        Ok((vals, None))
    }
}
