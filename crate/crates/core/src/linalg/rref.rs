//! Gauss-Jordan elimination with partial pivoting.

use super::mat::DenseMatrix;
use super::rank::RankTolerance;

/// Reduced row echelon form of `a` with partial pivoting.
///
/// Returns the reduced matrix and the strictly increasing pivot columns.
/// A column is accepted as a pivot when its best remaining entry exceeds
/// `tol.relative * max_abs(a) * max(rows, cols)` (or the absolute override),
/// mirroring the SVD rank threshold so pivot counts and SVD ranks agree on
/// well-separated spectra.
pub fn rref_partial_pivot(a: &DenseMatrix, tol: &RankTolerance) -> (DenseMatrix, Vec<usize>) {
    let mut r = a.clone();
    let m = r.rows;
    let n = r.cols;
    let tau = tol.threshold(a.max_abs(), m.max(n));
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row >= m {
            break;
        }
        // partial pivoting: largest magnitude in the column at or below `row`
        let mut best = row;
        let mut best_abs = r.get(row, col).abs();
        for i in row + 1..m {
            let v = r.get(i, col).abs();
            if v > best_abs {
                best = i;
                best_abs = v;
            }
        }
        if best_abs <= tau {
            continue;
        }
        if best != row {
            for j in 0..n {
                let tmp = r.get(row, j);
                r.set(row, j, r.get(best, j));
                r.set(best, j, tmp);
            }
        }
        let pivot = r.get(row, col);
        let inv = 1.0 / pivot;
        for j in col..n {
            let v = r.get(row, j) * inv;
            r.set(row, j, v);
        }
        r.set(row, col, 1.0);
        for i in 0..m {
            if i == row {
                continue;
            }
            let factor = r.get(i, col);
            if factor == 0.0 {
                continue;
            }
            let (head, tail) = split_rows(&mut r, i, row, n);
            for j in col..n {
                head[j] -= factor * tail[j];
            }
            head[col] = 0.0;
        }
        pivots.push(col);
        row += 1;
    }
    (r, pivots)
}

// Two disjoint mutable row views.
fn split_rows<'a>(
    r: &'a mut DenseMatrix,
    i: usize,
    j: usize,
    n: usize,
) -> (&'a mut [f64], &'a [f64]) {
    debug_assert_ne!(i, j);
    let data = r.data_mut();
    if i < j {
        let (lo, hi) = data.split_at_mut(j * n);
        (&mut lo[i * n..(i + 1) * n], &hi[..n])
    } else {
        let (lo, hi) = data.split_at_mut(i * n);
        let head = &mut hi[..n];
        let tail = &lo[j * n..(j + 1) * n];
        (head, tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_fixed_point() {
        let a = DenseMatrix::identity(3);
        let (r, pivots) = rref_partial_pivot(&a, &RankTolerance::default());
        assert_eq!(pivots, vec![0, 1, 2]);
        assert_eq!(r, a);
    }

    #[test]
    fn zero_leading_column() {
        let a = DenseMatrix::from_rows(vec![vec![0.0, 1.0], vec![0.0, 2.0]]);
        let (r, pivots) = rref_partial_pivot(&a, &RankTolerance::default());
        assert_eq!(pivots, vec![1]);
        assert_eq!(r.get(0, 1), 1.0);
        assert_eq!(r.get(1, 0), 0.0);
        assert_eq!(r.get(1, 1), 0.0);
    }

    #[test]
    fn hand_eliminated_rank_two() {
        let a = DenseMatrix::from_rows(vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![1.0, 0.0, 1.0],
        ]);
        let (_, pivots) = rref_partial_pivot(&a, &RankTolerance::default());
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn row_span_preserved() {
        use super::super::rank::numeric_rank;
        let a = DenseMatrix::from_rows(vec![
            vec![1.0, 2.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0, 1.0],
        ]);
        let tol = RankTolerance::default();
        let (r, pivots) = rref_partial_pivot(&a, &tol);
        let rank_a = numeric_rank(&a, &tol).unwrap().rank;
        assert_eq!(pivots.len(), rank_a);
        // stacking does not increase rank: same row space
        let stacked = a.vstack(&r);
        assert_eq!(numeric_rank(&stacked, &tol).unwrap().rank, rank_a);
    }
}
