//! Blocked Householder QR used as a row-space compressor.
//!
//! Only the triangular factor is kept: `R = Q^T A` has the same row space
//! and the same Gram matrix as `A`, so rank and kernel questions on a tall
//! matrix reduce to the small square factor. Panels are factored unblocked
//! and trailing updates run through compact-WY GEMM calls, which is what
//! makes the large prolongation matrices tractable.

use super::mat::DenseMatrix;

const PANEL: usize = 48;

/// Compute the upper-trapezoidal factor `R` (min(m,n) x n) of a Householder
/// QR of `a`. The rows of `R` span the same space as the rows of `a` and
/// `R^T R = A^T A` up to roundoff.
pub fn qr_row_compress(a: &DenseMatrix) -> DenseMatrix {
    let m = a.rows;
    let n = a.cols;
    let kmax = m.min(n);
    if kmax == 0 {
        return DenseMatrix::zeros(0, n);
    }
    let mut w = a.clone();
    let mut taus = vec![0.0f64; kmax];

    let mut k0 = 0;
    while k0 < kmax {
        let nb = PANEL.min(kmax - k0);
        // Unblocked factorization of the panel columns k0..k0+nb.
        for j in k0..k0 + nb {
            let tau = make_householder(&mut w, j);
            taus[j] = tau;
            if tau != 0.0 {
                for col in j + 1..k0 + nb {
                    apply_householder(&mut w, j, tau, col);
                }
            }
        }
        // Compact-WY update of the trailing columns via GEMM.
        if k0 + nb < n {
            let t = build_t(&w, &taus, k0, nb);
            let v = panel_v(&w, k0, nb, m);
            apply_block_reflector(&mut w, &v, &t, k0, k0 + nb);
        }
        k0 += nb;
    }

    let mut r = DenseMatrix::zeros(kmax, n);
    for i in 0..kmax {
        for j in i..n {
            r.set(i, j, w.get(i, j));
        }
    }
    r
}

// Generate the Householder reflector for column `j` acting on rows j..m.
// The essential part of v is stored below the diagonal (v[0] = 1 implied),
// the resulting diagonal value replaces w[j][j]. Returns tau.
fn make_householder(w: &mut DenseMatrix, j: usize) -> f64 {
    let m = w.rows;
    let alpha = w.get(j, j);
    let mut sub2 = 0.0;
    for i in j + 1..m {
        let x = w.get(i, j);
        sub2 += x * x;
    }
    if sub2 == 0.0 {
        return 0.0;
    }
    let norm = (alpha * alpha + sub2).sqrt();
    let beta = if alpha >= 0.0 { -norm } else { norm };
    let denom = alpha - beta;
    for i in j + 1..m {
        let v = w.get(i, j) / denom;
        w.set(i, j, v);
    }
    w.set(j, j, beta);
    (beta - alpha) / beta
}

// Apply reflector j (stored in column j with tau) to column `col`.
fn apply_householder(w: &mut DenseMatrix, j: usize, tau: f64, col: usize) {
    let m = w.rows;
    let mut dot = w.get(j, col);
    for i in j + 1..m {
        dot += w.get(i, j) * w.get(i, col);
    }
    let scale = tau * dot;
    if scale == 0.0 {
        return;
    }
    let top = w.get(j, col) - scale;
    w.set(j, col, top);
    for i in j + 1..m {
        let v = w.get(i, col) - scale * w.get(i, j);
        w.set(i, col, v);
    }
}

// Upper-triangular T of the compact-WY representation for panel columns
// k0..k0+nb: Q = H_0 H_1 ... = I - V T V^T.
fn build_t(w: &DenseMatrix, taus: &[f64], k0: usize, nb: usize) -> DenseMatrix {
    let m = w.rows;
    let mut t = DenseMatrix::zeros(nb, nb);
    for j in 0..nb {
        let tau = taus[k0 + j];
        t.set(j, j, tau);
        if j == 0 || tau == 0.0 {
            continue;
        }
        // z = V[:, 0..j]^T v_j  (v_j supported on rows k0+j..m, unit lead)
        let mut z = vec![0.0f64; j];
        for (zi, zval) in z.iter_mut().enumerate() {
            let col = k0 + zi;
            let mut acc = 0.0;
            for row in k0 + j..m {
                let vj = if row == k0 + j { 1.0 } else { w.get(row, k0 + j) };
                let vi = if row == col { 1.0 } else { w.get(row, col) };
                acc += vi * vj;
            }
            *zval = acc;
        }
        // T[0..j, j] = -tau * T[0..j, 0..j] * z
        for r in 0..j {
            let mut acc = 0.0;
            for c in r..j {
                acc += t.get(r, c) * z[c];
            }
            t.set(r, j, -tau * acc);
        }
    }
    t
}

// Extract the panel's V (unit lower trapezoidal, (m-k0) x nb) into a clean
// buffer so the trailing update can run as plain GEMM.
fn panel_v(w: &DenseMatrix, k0: usize, nb: usize, m: usize) -> DenseMatrix {
    let mut v = DenseMatrix::zeros(m - k0, nb);
    for j in 0..nb {
        v.set(j, j, 1.0);
        for i in k0 + j + 1..m {
            v.set(i - k0, j, w.get(i, k0 + j));
        }
    }
    v
}

// Trailing update W[k0.., c0..] -= V * (T^T * (V^T * W[k0.., c0..])).
fn apply_block_reflector(w: &mut DenseMatrix, v: &DenseMatrix, t: &DenseMatrix, k0: usize, c0: usize) {
    let m = w.rows;
    let n = w.cols;
    let rows = m - k0;
    let ncols = n - c0;
    let nb = v.cols;

    // X = V^T * W_trail
    let mut x = DenseMatrix::zeros(nb, ncols);
    unsafe {
        matrixmultiply::dgemm(
            nb,
            rows,
            ncols,
            1.0,
            v.data().as_ptr(),
            1,
            nb as isize,
            w.data().as_ptr().add(k0 * n + c0),
            n as isize,
            1,
            0.0,
            x.data_mut().as_mut_ptr(),
            ncols as isize,
            1,
        );
    }
    // Y = T^T * X
    let mut y = DenseMatrix::zeros(nb, ncols);
    unsafe {
        matrixmultiply::dgemm(
            nb,
            nb,
            ncols,
            1.0,
            t.data().as_ptr(),
            1,
            nb as isize,
            x.data().as_ptr(),
            ncols as isize,
            1,
            0.0,
            y.data_mut().as_mut_ptr(),
            ncols as isize,
            1,
        );
    }
    // W_trail -= V * Y
    unsafe {
        matrixmultiply::dgemm(
            rows,
            nb,
            ncols,
            -1.0,
            v.data().as_ptr(),
            nb as isize,
            1,
            y.data().as_ptr(),
            ncols as isize,
            1,
            1.0,
            w.data_mut().as_mut_ptr().add(k0 * n + c0),
            n as isize,
            1,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(m: usize, n: usize, seed: u64) -> DenseMatrix {
        let mut state = seed;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        let mut a = DenseMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                a.set(i, j, next());
            }
        }
        a
    }

    fn assert_gram_preserved(a: &DenseMatrix) {
        let r = qr_row_compress(a);
        assert_eq!(r.rows, a.rows.min(a.cols));
        assert_eq!(r.cols, a.cols);
        // upper trapezoidal
        for i in 0..r.rows {
            for j in 0..i.min(r.cols) {
                assert_eq!(r.get(i, j), 0.0);
            }
        }
        let ga = a.gram();
        let gr = r.gram();
        let scale = ga.max_abs().max(1.0);
        for i in 0..ga.rows {
            for j in 0..ga.cols {
                assert!(
                    (ga.get(i, j) - gr.get(i, j)).abs() <= 1e-11 * scale,
                    "gram mismatch at ({}, {}): {} vs {}",
                    i,
                    j,
                    ga.get(i, j),
                    gr.get(i, j)
                );
            }
        }
    }

    #[test]
    fn preserves_gram_various_shapes() {
        for (m, n, seed) in [
            (5usize, 3usize, 1u64),
            (3, 5, 2),
            (57, 23, 3),
            (23, 57, 4),
            (130, 70, 5),
            (70, 130, 6),
            (200, 101, 7),
        ] {
            assert_gram_preserved(&random_matrix(m, n, seed));
        }
    }

    #[test]
    fn rank_deficient_input() {
        // duplicate rows
        let base = random_matrix(40, 30, 11);
        let a = base.vstack(&base);
        assert_gram_preserved(&a);
    }

    #[test]
    fn zero_matrix() {
        let a = DenseMatrix::zeros(4, 3);
        let r = qr_row_compress(&a);
        assert_eq!(r.max_abs(), 0.0);
    }
}
