//! Numeric rank and nullspace with an explicit tolerance policy.

use super::eig::symmetric_eig_unchecked;
use super::mat::DenseMatrix;
use super::qr::qr_row_compress;
use crate::error::{Error, Result};

/// How singular values are thresholded into a rank decision.
///
/// When `absolute` is unset the cut is `relative * sigma_max * max(rows, cols)`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct RankTolerance {
    pub relative: f64,
    pub absolute: Option<f64>,
}

impl Default for RankTolerance {
    fn default() -> Self {
        RankTolerance {
            relative: 1e-8,
            absolute: None,
        }
    }
}

impl RankTolerance {
    pub fn relative(rel: f64) -> Self {
        RankTolerance {
            relative: rel,
            absolute: None,
        }
    }

    pub fn threshold(&self, sigma_max: f64, maxdim: usize) -> f64 {
        match self.absolute {
            Some(a) => a,
            None => self.relative * sigma_max * maxdim as f64,
        }
    }
}

/// Outcome of a rank decision, keeping the full spectrum for diagnostics.
#[derive(Clone, Debug)]
pub struct RankDecision {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub threshold_used: f64,
}

impl RankDecision {
    /// Smallest ratio gap around the cut; near 1 means the decision was
    /// ambiguous at this tolerance.
    pub fn gap_ratio(&self) -> Option<f64> {
        if self.rank == 0 || self.rank >= self.singular_values.len() {
            return None;
        }
        let hi = self.singular_values[self.rank - 1];
        let lo = self.singular_values[self.rank];
        if lo == 0.0 {
            None
        } else {
            Some(hi / lo)
        }
    }
}

// Matrices at most this wide on their short side take the direct SVD path.
const DIRECT_SVD_LIMIT: usize = 320;

fn svd_values_direct(a: &DenseMatrix) -> Result<Vec<f64>> {
    let na = a.to_nalgebra();
    let svd = nalgebra::SVD::try_new(na, false, false, f64::EPSILON, 0).ok_or(
        Error::SvdFailure {
            rows: a.rows,
            cols: a.cols,
        },
    )?;
    let mut s: Vec<f64> = svd.singular_values.iter().cloned().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(s)
}

// Spectrum through the Gram route: row-compress when tall, then eigenvalues
// of R^T R. Exact-arithmetic singular values of A; used for matrices too
// large for the direct bidiagonalization.
fn svd_values_gram(a: &DenseMatrix) -> Result<Vec<f64>> {
    let work = if a.rows > a.cols + a.cols / 4 {
        qr_row_compress(a)
    } else {
        a.clone()
    };
    let gram = work.gram();
    let (eigs, _) = symmetric_eig_unchecked(&gram, false)?;
    let mut s: Vec<f64> = eigs.iter().map(|&l| l.max(0.0).sqrt()).collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s.truncate(a.rows.min(a.cols));
    Ok(s)
}

/// Singular values of `a`, descending.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    // Symmetric matrices get their spectrum from the eigendecomposition,
    // which avoids squaring and keeps small eigenvalues sharp.
    if a.rows == a.cols && a.max_asymmetry() <= 1e-12 * (1.0 + a.max_abs()) {
        let (eigs, _) = symmetric_eig_unchecked(a, false)?;
        let mut s: Vec<f64> = eigs.iter().map(|l| l.abs()).collect();
        s.sort_by(|x, y| y.partial_cmp(x).unwrap());
        return Ok(s);
    }
    if a.rows.min(a.cols) <= DIRECT_SVD_LIMIT {
        svd_values_direct(a)
    } else {
        svd_values_gram(a)
    }
}

/// Rank of `a` at the given tolerance, with the spectrum that produced it.
pub fn numeric_rank(a: &DenseMatrix, tol: &RankTolerance) -> Result<RankDecision> {
    if a.is_empty() {
        return Ok(RankDecision {
            rank: 0,
            singular_values: Vec::new(),
            threshold_used: tol.threshold(0.0, 1),
        });
    }
    let s = singular_values(a)?;
    let smax = s.first().cloned().unwrap_or(0.0);
    let tau = tol.threshold(smax, a.rows.max(a.cols));
    let rank = s.iter().take_while(|&&v| v > tau).count();
    Ok(RankDecision {
        rank,
        singular_values: s,
        threshold_used: tau,
    })
}

/// Orthonormal rows spanning the (right) nullspace `{v : A v ≈ 0}`.
/// Dimension is `cols - numeric_rank(a)`.
pub fn nullspace_basis(a: &DenseMatrix, tol: &RankTolerance) -> Result<DenseMatrix> {
    if a.is_empty() {
        return Ok(DenseMatrix::identity(a.cols));
    }
    let (s, vt) = right_singular_vectors(a)?;
    let smax = s.first().cloned().unwrap_or(0.0);
    let tau = tol.threshold(smax, a.rows.max(a.cols));
    let rank = s.iter().take_while(|&&v| v > tau).count();
    let dim = a.cols - rank;
    let mut out = DenseMatrix::zeros(dim, a.cols);
    for r in 0..dim {
        out.row_mut(r).copy_from_slice(vt.row(rank + r));
    }
    Ok(out)
}

/// Orthonormal rows spanning the row space of `a`.
pub fn row_space_basis(a: &DenseMatrix, tol: &RankTolerance) -> Result<DenseMatrix> {
    if a.is_empty() {
        return Ok(DenseMatrix::zeros(0, a.cols));
    }
    let (s, vt) = right_singular_vectors(a)?;
    let smax = s.first().cloned().unwrap_or(0.0);
    let tau = tol.threshold(smax, a.rows.max(a.cols));
    let rank = s.iter().take_while(|&&v| v > tau).count();
    Ok(vt.leading(rank, a.cols))
}

// Full set of right singular vectors: returns (sigma descending, V^T with
// all `cols` rows, orthonormal). The direct path pads wide matrices square
// so the co-kernel rows are present.
fn right_singular_vectors(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    if a.rows == a.cols && a.max_asymmetry() <= 1e-12 * (1.0 + a.max_abs()) {
        let (eigs, vecs) = symmetric_eig_unchecked(a, true)?;
        let vecs = vecs.expect("eigenvectors requested");
        let mut order: Vec<usize> = (0..eigs.len()).collect();
        order.sort_by(|&i, &j| eigs[j].abs().partial_cmp(&eigs[i].abs()).unwrap());
        let mut vt = DenseMatrix::zeros(a.cols, a.cols);
        let mut s = Vec::with_capacity(a.cols);
        for (r, &idx) in order.iter().enumerate() {
            s.push(eigs[idx].abs());
            for c in 0..a.cols {
                vt.set(r, c, vecs.get(c, idx));
            }
        }
        return Ok((s, vt));
    }
    if a.rows.min(a.cols) <= DIRECT_SVD_LIMIT && a.rows.max(a.cols) <= 4 * DIRECT_SVD_LIMIT {
        let work = if a.rows < a.cols {
            // pad to square so V^T carries the full co-kernel
            a.vstack(&DenseMatrix::zeros(a.cols - a.rows, a.cols))
        } else {
            a.clone()
        };
        let na = work.to_nalgebra();
        let svd = nalgebra::SVD::try_new(na, false, true, f64::EPSILON, 0).ok_or(
            Error::SvdFailure {
                rows: a.rows,
                cols: a.cols,
            },
        )?;
        let vt_na = svd.v_t.expect("v_t requested");
        let mut pairs: Vec<(f64, usize)> = svd
            .singular_values
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        let mut vt = DenseMatrix::zeros(vt_na.nrows(), a.cols);
        let mut s = Vec::with_capacity(pairs.len());
        for (r, (val, idx)) in pairs.iter().enumerate() {
            s.push(*val);
            for c in 0..a.cols {
                vt.set(r, c, vt_na[(*idx, c)]);
            }
        }
        Ok((s, vt))
    } else {
        // Gram route for the big matrices.
        let work = if a.rows > a.cols + a.cols / 4 {
            qr_row_compress(a)
        } else {
            a.clone()
        };
        let gram = work.gram();
        let (eigs, vecs) = symmetric_eig_unchecked(&gram, true)?;
        let vecs = vecs.expect("eigenvectors requested");
        let mut order: Vec<usize> = (0..eigs.len()).collect();
        order.sort_by(|&i, &j| eigs[j].partial_cmp(&eigs[i]).unwrap());
        let mut vt = DenseMatrix::zeros(a.cols, a.cols);
        let mut s = Vec::with_capacity(a.cols);
        for (r, &idx) in order.iter().enumerate() {
            s.push(eigs[idx].max(0.0).sqrt());
            for c in 0..a.cols {
                vt.set(r, c, vecs.get(c, idx));
            }
        }
        Ok((s, vt))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_full_rank() {
        let a = DenseMatrix::identity(3);
        let d = numeric_rank(&a, &RankTolerance::default()).unwrap();
        assert_eq!(d.rank, 3);
    }

    #[test]
    fn rank_one_matrix() {
        let a = DenseMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let d = numeric_rank(&a, &RankTolerance::default()).unwrap();
        assert_eq!(d.rank, 1);
        assert!(d.singular_values[0] > d.threshold_used);
        assert!(d.threshold_used >= d.singular_values[1]);
    }

    #[test]
    fn psd_forced_moment_shape() {
        // moment matrix [[a,0,0],[0,0,0],[0,0,0]] with a > 0 has rank 1
        let a = DenseMatrix::from_rows(vec![
            vec![0.7, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ]);
        let d = numeric_rank(&a, &RankTolerance::default()).unwrap();
        assert_eq!(d.rank, 1);
    }

    #[test]
    fn nullspace_of_zero_wide_matrix() {
        let a = DenseMatrix::zeros(2, 3);
        let ns = nullspace_basis(&a, &RankTolerance::default()).unwrap();
        assert_eq!(ns.rows, 3);
    }

    #[test]
    fn nullspace_of_single_row() {
        let a = DenseMatrix::from_rows(vec![vec![1.0, 0.0, -1.0]]);
        let ns = nullspace_basis(&a, &RankTolerance::default()).unwrap();
        assert_eq!(ns.rows, 2);
        for r in 0..2 {
            let dot: f64 = ns.row(r).iter().zip(a.row(0)).map(|(x, y)| x * y).sum();
            assert!(dot.abs() < 1e-12, "row {} not orthogonal: {}", r, dot);
        }
    }

    #[test]
    fn hand_rank_two() {
        // rank 2 by hand Gaussian elimination
        let a = DenseMatrix::from_rows(vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![1.0, 0.0, 1.0],
        ]);
        let d = numeric_rank(&a, &RankTolerance::default()).unwrap();
        assert_eq!(d.rank, 2);
    }

    #[test]
    fn rank_transpose_invariance() {
        let mut state = 9u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        for _ in 0..5 {
            let mut a = DenseMatrix::zeros(12, 7);
            for i in 0..12 {
                for j in 0..7 {
                    a.set(i, j, next());
                }
            }
            let tol = RankTolerance::default();
            let r1 = numeric_rank(&a, &tol).unwrap().rank;
            let r2 = numeric_rank(&a.transpose(), &tol).unwrap().rank;
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn nullspace_residual_bound() {
        // 3-dim kernel embedded in a 40x25 matrix
        let mut state = 33u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        let mut b = DenseMatrix::zeros(40, 22);
        for i in 0..40 {
            for j in 0..22 {
                b.set(i, j, next());
            }
        }
        let mut embed = DenseMatrix::zeros(22, 25);
        for i in 0..22 {
            for j in 0..25 {
                embed.set(i, j, next());
            }
        }
        let a = b.matmul(&embed); // rank <= 22
        let tol = RankTolerance::default();
        let d = numeric_rank(&a, &tol).unwrap();
        assert_eq!(d.rank, 22);
        let ns = nullspace_basis(&a, &tol).unwrap();
        assert_eq!(ns.rows, 3);
        let smax = d.singular_values[0];
        for r in 0..ns.rows {
            let res = a.matvec(ns.row(r));
            let worst = res.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            assert!(worst <= 10.0 * d.threshold_used * smax.max(1.0));
        }
    }

    #[test]
    fn big_matrix_gram_path_matches_direct() {
        // exercise the Gram path against the direct SVD on a matrix
        // straddling the size cutoff
        let mut state = 77u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        let mut b = DenseMatrix::zeros(420, 30);
        for i in 0..420 {
            for j in 0..30 {
                b.set(i, j, next());
            }
        }
        let mut c = DenseMatrix::zeros(30, 360);
        for i in 0..30 {
            for j in 0..360 {
                c.set(i, j, next());
            }
        }
        let a = b.matmul(&c); // 420x360 of rank 30, takes the Gram path
        let d = numeric_rank(&a, &RankTolerance::default()).unwrap();
        assert_eq!(d.rank, 30);
        let ns = nullspace_basis(&a, &RankTolerance::default()).unwrap();
        assert_eq!(ns.rows, 330);
    }
}
