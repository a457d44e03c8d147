//! Real Schur factorization with eigenvalue clustering and reordering.
//!
//! Roots with multiplicities surface as tight eigenvalue clusters of the
//! multiplication-matrix combination. For each cluster we reorder its 1x1 /
//! 2x2 diagonal blocks to the leading position by adjacent block swaps
//! (solving a tiny Sylvester equation per swap) and read an orthonormal
//! basis of the cluster's invariant subspace off the leading Schur vectors.

use num_complex::Complex64;

use super::mat::DenseMatrix;
use crate::error::{Error, Result};

/// One eigenvalue cluster of a real matrix.
#[derive(Clone, Debug)]
pub struct SchurCluster {
    /// Eigenvalues in the cluster (complex pairs appear as both members).
    pub eigenvalues: Vec<Complex64>,
    /// Mean of the cluster's eigenvalues.
    pub mean: Complex64,
    /// Algebraic multiplicity (= eigenvalues.len()).
    pub size: usize,
    /// Orthonormal columns spanning the cluster's invariant subspace.
    pub basis: DenseMatrix,
}

/// Group the eigenvalues of `a` into clusters under the transitive closure
/// of `|l_i - l_j| <= cluster_tol * (1 + ||a||_F)` and return each cluster
/// with its invariant subspace. Conjugate 2x2 blocks are kept intact.
pub fn clustered_schur(a: &DenseMatrix, cluster_tol: f64) -> Result<Vec<SchurCluster>> {
    if a.rows != a.cols {
        return Err(Error::EigFailure("clustered_schur needs a square matrix".into()));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut t, mut q) = real_schur(a)?;
    split_real_two_blocks(&mut t, &mut q);

    let blocks = scan_blocks(&t);
    let eigs: Vec<Vec<Complex64>> = blocks
        .iter()
        .map(|&(p, sz)| block_eigenvalues(&t, p, sz))
        .collect();

    // union-find over blocks
    let scale = cluster_tol * (1.0 + a.frobenius());
    let mut parent: Vec<usize> = (0..blocks.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let close = eigs[i]
                .iter()
                .any(|a| eigs[j].iter().any(|b| (a - b).norm() <= scale));
            if close {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut cluster_ids: Vec<usize> = (0..blocks.len())
        .map(|i| find(&mut parent, i))
        .collect();
    // compress ids to 0..k in order of first appearance
    let mut remap = std::collections::BTreeMap::new();
    for id in cluster_ids.iter_mut() {
        let next = remap.len();
        *id = *remap.entry(*id).or_insert(next);
    }
    let num_clusters = remap.len();

    let mut out = Vec::with_capacity(num_clusters);
    for c in 0..num_clusters {
        let mut tc = t.clone();
        let mut qc = q.clone();
        let mut blocks_c = blocks.clone();
        let mut ids_c = cluster_ids.clone();
        reorder_to_front(&mut tc, &mut qc, &mut blocks_c, &mut ids_c, c)?;
        drop(blocks_c);
        drop(ids_c);
        let size: usize = blocks
            .iter()
            .zip(&cluster_ids)
            .filter(|(_, &id)| id == c)
            .map(|(&(_, sz), _)| sz)
            .sum();
        let basis = qc.column_block(0, size);
        let mut values = Vec::new();
        for (i, &(p, sz)) in blocks.iter().enumerate() {
            if cluster_ids[i] == c {
                values.extend(block_eigenvalues(&t, p, sz));
            }
        }
        let mean = values.iter().sum::<Complex64>() / values.len() as f64;
        out.push(SchurCluster {
            mean,
            size,
            eigenvalues: values,
            basis,
        });
    }
    // deterministic cluster order: by mean (real part, then imaginary)
    out.sort_by(|a, b| {
        (a.mean.re, a.mean.im)
            .partial_cmp(&(b.mean.re, b.mean.im))
            .unwrap()
    });
    Ok(out)
}

fn real_schur(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let na = a.to_nalgebra();
    let schur = nalgebra::Schur::try_new(na, f64::EPSILON, 0)
        .ok_or_else(|| Error::EigFailure("QR iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    Ok((DenseMatrix::from_nalgebra(&t), DenseMatrix::from_nalgebra(&q)))
}

// Diagonal block layout of an upper quasi-triangular matrix.
fn scan_blocks(t: &DenseMatrix) -> Vec<(usize, usize)> {
    let n = t.rows;
    let tiny = 1e-13 * (1.0 + t.max_abs());
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t.get(i + 1, i).abs() > tiny {
            blocks.push((i, 2));
            i += 2;
        } else {
            blocks.push((i, 1));
            i += 1;
        }
    }
    blocks
}

fn block_eigenvalues(t: &DenseMatrix, p: usize, sz: usize) -> Vec<Complex64> {
    if sz == 1 {
        return vec![Complex64::new(t.get(p, p), 0.0)];
    }
    let a = t.get(p, p);
    let b = t.get(p, p + 1);
    let c = t.get(p + 1, p);
    let d = t.get(p + 1, p + 1);
    let mid = 0.5 * (a + d);
    let disc = 0.25 * (a - d) * (a - d) + b * c;
    if disc >= 0.0 {
        let r = disc.sqrt();
        vec![
            Complex64::new(mid + r, 0.0),
            Complex64::new(mid - r, 0.0),
        ]
    } else {
        let r = (-disc).sqrt();
        vec![Complex64::new(mid, r), Complex64::new(mid, -r)]
    }
}

// Rotate any 2x2 bump with real eigenvalues into two 1x1 blocks.
fn split_real_two_blocks(t: &mut DenseMatrix, q: &mut DenseMatrix) {
    let n = t.rows;
    let tiny = 1e-13 * (1.0 + t.max_abs());
    let mut p = 0;
    while p + 1 < n {
        if t.get(p + 1, p).abs() <= tiny {
            p += 1;
            continue;
        }
        let a = t.get(p, p);
        let b = t.get(p, p + 1);
        let c = t.get(p + 1, p);
        let d = t.get(p + 1, p + 1);
        let disc = 0.25 * (a - d) * (a - d) + b * c;
        if disc < 0.0 {
            p += 2;
            continue;
        }
        // real eigenvalues: rotate eigenvector for lambda to e1
        let lambda = 0.5 * (a + d) + disc.sqrt() * if a - d >= 0.0 { 1.0 } else { -1.0 };
        // eigenvector of [[a,b],[c,d]] for lambda
        let (mut vx, mut vy) = if b.abs() + (lambda - a).abs() > c.abs() + (lambda - d).abs() {
            (b, lambda - a)
        } else {
            (lambda - d, c)
        };
        let norm = (vx * vx + vy * vy).sqrt();
        if norm == 0.0 {
            p += 2;
            continue;
        }
        vx /= norm;
        vy /= norm;
        // Givens G = [[vx, -vy], [vy, vx]], columns (v, v_perp)
        apply_window_rotation(t, q, p, vx, vy);
        t.set(p + 1, p, 0.0);
        p += 1;
    }
}

// Similarity by the 2x2 rotation with columns (v, v_perp) on window p..p+2.
fn apply_window_rotation(t: &mut DenseMatrix, q: &mut DenseMatrix, p: usize, vx: f64, vy: f64) {
    let n = t.rows;
    // T <- G^T T (rows p, p+1)
    for j in 0..n {
        let x = t.get(p, j);
        let y = t.get(p + 1, j);
        t.set(p, j, vx * x + vy * y);
        t.set(p + 1, j, -vy * x + vx * y);
    }
    // T <- T G (columns p, p+1)
    for i in 0..n {
        let x = t.get(i, p);
        let y = t.get(i, p + 1);
        t.set(i, p, vx * x + vy * y);
        t.set(i, p + 1, -vy * x + vx * y);
    }
    // Q <- Q G
    for i in 0..n {
        let x = q.get(i, p);
        let y = q.get(i, p + 1);
        q.set(i, p, vx * x + vy * y);
        q.set(i, p + 1, -vy * x + vx * y);
    }
}

// Bubble all blocks of `cluster` to the leading position, preserving the
// relative order of everything else.
fn reorder_to_front(
    t: &mut DenseMatrix,
    q: &mut DenseMatrix,
    blocks: &mut Vec<(usize, usize)>,
    ids: &mut Vec<usize>,
    cluster: usize,
) -> Result<()> {
    let mut front = 0; // number of leading blocks already in place
    loop {
        // first block of the cluster at or after `front`
        let pos = match ids.iter().skip(front).position(|&id| id == cluster) {
            Some(off) => front + off,
            None => break,
        };
        // bubble it left one neighbor at a time
        let mut k = pos;
        while k > front {
            let (p_left, s_left) = blocks[k - 1];
            let (_, s_right) = blocks[k];
            swap_adjacent_blocks(t, q, p_left, s_left, s_right)?;
            blocks[k - 1] = (p_left, s_right);
            blocks[k] = (p_left + s_right, s_left);
            ids.swap(k - 1, k);
            k -= 1;
        }
        front += 1;
    }
    Ok(())
}

// Swap adjacent diagonal blocks [[A, C], [0, B]] at rows p.., sizes p1, p2.
fn swap_adjacent_blocks(
    t: &mut DenseMatrix,
    q: &mut DenseMatrix,
    p: usize,
    p1: usize,
    p2: usize,
) -> Result<()> {
    let w = p1 + p2;
    // Solve A X - X B = -C for the p1 x p2 unknown X.
    let mut sys = vec![vec![0.0f64; p1 * p2 + 1]; p1 * p2];
    for i in 0..p1 {
        for j in 0..p2 {
            let row = i * p2 + j;
            for k in 0..p1 {
                sys[row][k * p2 + j] += t.get(p + i, p + k);
            }
            for l in 0..p2 {
                sys[row][i * p2 + l] -= t.get(p + p1 + l, p + p1 + j);
            }
            sys[row][p1 * p2] = -t.get(p + i, p + p1 + j);
        }
    }
    let x = solve_small(&mut sys).ok_or_else(|| {
        Error::EigFailure("singular Sylvester system while swapping Schur blocks".into())
    })?;

    // Orthonormalize Z = [X; I] and extend to an orthogonal G (w x w).
    let mut z = DenseMatrix::zeros(w, p2);
    for i in 0..p1 {
        for j in 0..p2 {
            z.set(i, j, x[i * p2 + j]);
        }
    }
    for j in 0..p2 {
        z.set(p1 + j, j, 1.0);
    }
    let g = orthogonal_from_qr(&z);

    // T <- G^T T G on the window, Q <- Q G.
    let n = t.rows;
    let mut scratch = vec![0.0f64; w];
    for j in p..n {
        for (r, s) in scratch.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..w {
                acc += g.get(i, r) * t.get(p + i, j);
            }
            *s = acc;
        }
        for r in 0..w {
            t.set(p + r, j, scratch[r]);
        }
    }
    for i in 0..(p + w).min(n) {
        for (cidx, s) in scratch.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..w {
                acc += t.get(i, p + k) * g.get(k, cidx);
            }
            *s = acc;
        }
        for c in 0..w {
            t.set(i, p + c, scratch[c]);
        }
    }
    for i in 0..n {
        for (cidx, s) in scratch.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..w {
                acc += q.get(i, p + k) * g.get(k, cidx);
            }
            *s = acc;
        }
        for c in 0..w {
            q.set(i, p + c, scratch[c]);
        }
    }
    // clean the lower part of the window
    for i in p2..w {
        for j in 0..p2.min(i) {
            t.set(p + i, p + j, 0.0);
        }
    }
    // a swapped 2x2 that is actually real may appear; leave splitting to the
    // caller (blocks keep their eigenvalue content under similarity)
    Ok(())
}

// Gaussian elimination with partial pivoting on an augmented system of at
// most 4 unknowns. Returns None when the pivot collapses.
fn solve_small(sys: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let n = sys.len();
    for col in 0..n {
        let mut best = col;
        for r in col + 1..n {
            if sys[r][col].abs() > sys[best][col].abs() {
                best = r;
            }
        }
        if sys[best][col].abs() < 1e-300 {
            return None;
        }
        sys.swap(col, best);
        let pivot = sys[col][col];
        for j in col..=n {
            sys[col][j] /= pivot;
        }
        for r in 0..n {
            if r != col && sys[r][col] != 0.0 {
                let f = sys[r][col];
                for j in col..=n {
                    let v = sys[col][j];
                    sys[r][j] -= f * v;
                }
            }
        }
    }
    Some(sys.iter().map(|row| row[sys.len()]).collect())
}

// Full orthogonal factor of the w x p2 matrix z (w <= 4).
fn orthogonal_from_qr(z: &DenseMatrix) -> DenseMatrix {
    let w = z.rows;
    let p2 = z.cols;
    let mut work = z.clone();
    let mut g = DenseMatrix::identity(w);
    for k in 0..p2 {
        let alpha = work.get(k, k);
        let mut sub2 = 0.0;
        for i in k + 1..w {
            sub2 += work.get(i, k) * work.get(i, k);
        }
        if sub2 == 0.0 {
            continue;
        }
        let norm = (alpha * alpha + sub2).sqrt();
        let beta = if alpha >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0f64; w];
        v[k] = alpha - beta;
        for i in k + 1..w {
            v[i] = work.get(i, k);
        }
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // work <- H work
        for j in 0..p2 {
            let mut dot = 0.0;
            for i in k..w {
                dot += v[i] * work.get(i, j);
            }
            let s = tau * dot;
            for i in k..w {
                let val = work.get(i, j) - s * v[i];
                work.set(i, j, val);
            }
        }
        // g <- g H
        for i in 0..w {
            let mut dot = 0.0;
            for j in k..w {
                dot += g.get(i, j) * v[j];
            }
            let s = tau * dot;
            for j in k..w {
                let val = g.get(i, j) - s * v[j];
                g.set(i, j, val);
            }
        }
        work.set(k, k, beta);
    }
    g
}
