//! Root extraction from the multiplication matrices and root verification.
//!
//! A random unit combination of the transposed multiplication matrices has
//! the point evaluations as eigenvalues; its eigenvector for a root `v` is
//! the moment vector `(b(v))_b`. Clusters of the combination's spectrum are
//! processed through the reordered Schur factorization: the invariant
//! subspace of a cluster compresses every `X_i^T` to a small block whose
//! mean diagonal reads off the root coordinates, which stays stable in the
//! presence of multiple roots.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Mode;
use crate::error::{Error, Result};
use crate::linalg::{clustered_schur, DenseMatrix};
use crate::quotient::{MultiplicationSystem, QuotientBasis};
use crate::poly::PolySystem;

/// One extracted candidate root.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Root {
    /// Coordinates as (re, im) pairs.
    pub coordinates: Vec<(f64, f64)>,
    /// `max_j |h_j(v)|` over the original generators.
    pub residual: f64,
    pub is_real: bool,
    /// Multiplicity of the Schur cluster the root came from.
    pub cluster_size: usize,
}

impl Root {
    pub fn complex_coordinates(&self) -> Vec<Complex64> {
        self.coordinates
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect()
    }

    pub fn real_coordinates(&self) -> Vec<f64> {
        self.coordinates.iter().map(|&(re, _)| re).collect()
    }

    fn max_imag(&self) -> f64 {
        self.coordinates
            .iter()
            .fold(0.0f64, |acc, &(_, im)| acc.max(im.abs()))
    }

    fn max_abs_coord(&self) -> f64 {
        self.coordinates
            .iter()
            .fold(0.0f64, |acc, &(re, im)| acc.max((re * re + im * im).sqrt()))
    }
}

fn system_residual(sys: &PolySystem, v: &[Complex64]) -> f64 {
    sys.generators()
        .iter()
        .map(|h| h.eval_complex(v).norm())
        .fold(0.0f64, f64::max)
}

/// Settings for extraction and verification.
#[derive(Clone, Copy, Debug)]
pub struct ExtractSettings {
    pub seed: u64,
    pub cluster_tol: f64,
    pub imag_tol: f64,
    pub residual_tol: f64,
    /// Gate on `c(X)` relative to `max_i ||X_i||`.
    pub commutativity_gate: f64,
    pub refine: bool,
}

impl Default for ExtractSettings {
    fn default() -> Self {
        ExtractSettings {
            seed: 20100815,
            cluster_tol: 1e-3,
            imag_tol: 1e-6,
            residual_tol: 1e-4,
            commutativity_gate: 1e-5,
            refine: true,
        }
    }
}

/// Extract all candidate roots of the quotient ideal.
///
/// Residuals are evaluated against the original generators. A degenerate
/// random combination (clusters merged across distinct roots) is detected
/// through the border-residual of multi-point clusters and retried with a
/// fresh combination, up to 3 times.
pub fn extract_roots(
    ms: &MultiplicationSystem,
    qb: &QuotientBasis,
    sys: &PolySystem,
    settings: &ExtractSettings,
) -> Result<Vec<Root>> {
    let nb = qb.len();
    if nb == 0 {
        return Ok(Vec::new());
    }
    let n = sys.num_vars();
    let gate = settings.commutativity_gate * ms.max_norm().max(1.0);
    if ms.commutativity_error > gate {
        return Err(Error::CommutativityGate {
            c: ms.commutativity_error,
            gate,
        });
    }
    let transposed: Vec<DenseMatrix> = ms.matrices.iter().map(|x| x.transpose()).collect();
    let scale = sys
        .generators()
        .iter()
        .map(|h| h.max_coeff())
        .fold(0.0f64, f64::max)
        .max(1.0);

    let mut last_err: Option<Error> = None;
    for attempt in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed.wrapping_add(attempt));
        let mut coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm: f64 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        for c in coeffs.iter_mut() {
            *c /= norm.max(1e-12);
        }
        let mut a = DenseMatrix::zeros(nb, nb);
        for (c, x) in coeffs.iter().zip(&transposed) {
            a.axpy(*c, x);
        }
        match try_extract(&a, &transposed, sys, settings) {
            Ok(roots) => {
                // merged-cluster detection: a multi-point cluster whose mean
                // is far from the variety signals a degenerate combination
                let merged = roots.iter().any(|r| {
                    r.cluster_size > 1 && r.residual > 1e-2 * scale * (1.0 + r.max_abs_coord())
                });
                if !merged || attempt == 2 {
                    return Ok(roots);
                }
                last_err = Some(Error::Extraction("clusters merged distinct roots".into()));
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Extraction("no extraction attempt succeeded".into())))
}

fn try_extract(
    a: &DenseMatrix,
    transposed: &[DenseMatrix],
    sys: &PolySystem,
    settings: &ExtractSettings,
) -> Result<Vec<Root>> {
    let clusters = clustered_schur(a, settings.cluster_tol)?;
    let mut roots = Vec::new();
    for cl in &clusters {
        let u = &cl.basis;
        let k = cl.size;
        // compressed blocks U^T X_i^T U
        let compressed: Vec<DenseMatrix> = transposed
            .iter()
            .map(|x| u.transpose().matmul(&x.matmul(u)))
            .collect();
        let n_real = cl.eigenvalues.iter().filter(|e| e.im == 0.0).count();
        if n_real == k {
            // real cluster: mean of each coordinate block
            let coords: Vec<(f64, f64)> = compressed
                .iter()
                .map(|c| (c.trace() / k as f64, 0.0))
                .collect();
            let v: Vec<Complex64> = coords.iter().map(|&(re, _)| Complex64::new(re, 0.0)).collect();
            roots.push(Root {
                residual: system_residual(sys, &v),
                is_real: true,
                cluster_size: k,
                coordinates: coords,
            });
        } else if n_real == 0 && k == 2 {
            // one conjugate pair: closed-form eigenvector of the 2x2 block
            let ca = u.transpose().matmul(&a.matmul(u));
            let lambda = cl
                .eigenvalues
                .iter()
                .find(|e| e.im > 0.0)
                .cloned()
                .unwrap_or(cl.eigenvalues[0]);
            let (w0, w1) = pair_eigenvector(&ca, lambda);
            let denom = (w0.conj() * w0 + w1.conj() * w1).re;
            let mut coords = Vec::with_capacity(compressed.len());
            for c in &compressed {
                let c00 = Complex64::new(c.get(0, 0), 0.0);
                let c01 = Complex64::new(c.get(0, 1), 0.0);
                let c10 = Complex64::new(c.get(1, 0), 0.0);
                let c11 = Complex64::new(c.get(1, 1), 0.0);
                // w^H C w / w^H w
                let cw0 = c00 * w0 + c01 * w1;
                let cw1 = c10 * w0 + c11 * w1;
                let val = (w0.conj() * cw0 + w1.conj() * cw1) / denom;
                coords.push(val);
            }
            let v: Vec<Complex64> = coords.clone();
            let conj: Vec<Complex64> = coords.iter().map(|c| c.conj()).collect();
            roots.push(Root {
                residual: system_residual(sys, &v),
                is_real: false,
                cluster_size: 1,
                coordinates: coords.iter().map(|c| (c.re, c.im)).collect(),
            });
            roots.push(Root {
                residual: system_residual(sys, &conj),
                is_real: false,
                cluster_size: 1,
                coordinates: conj.iter().map(|c| (c.re, c.im)).collect(),
            });
        } else {
            // mixed cluster: a near-real multiple root whose perturbed
            // spectrum splits into real and conjugate parts; the block mean
            // still averages to the root
            let coords: Vec<(f64, f64)> = compressed
                .iter()
                .map(|c| (c.trace() / k as f64, 0.0))
                .collect();
            let v: Vec<Complex64> = coords.iter().map(|&(re, _)| Complex64::new(re, 0.0)).collect();
            roots.push(Root {
                residual: system_residual(sys, &v),
                is_real: true,
                cluster_size: k,
                coordinates: coords,
            });
        }
    }
    // mark near-real flags
    for r in roots.iter_mut() {
        if !r.is_real {
            let gate = settings.imag_tol * (1.0 + r.max_abs_coord());
            if r.max_imag() <= gate {
                r.is_real = true;
            }
        }
    }
    Ok(roots)
}

// eigenvector of the real 2x2 block for complex eigenvalue lambda
fn pair_eigenvector(ca: &DenseMatrix, lambda: Complex64) -> (Complex64, Complex64) {
    let a = ca.get(0, 0);
    let b = ca.get(0, 1);
    let c = ca.get(1, 0);
    let d = ca.get(1, 1);
    if b.abs() >= c.abs() {
        (Complex64::new(b, 0.0), lambda - Complex64::new(a, 0.0))
    } else {
        (lambda - Complex64::new(d, 0.0), Complex64::new(c, 0.0))
    }
}

/// Verification filter.
///
/// Real mode keeps roots whose imaginary parts are inside the gate and
/// whose residual (after an optional Newton polish on the real part) passes
/// the residual gate, scaled by the generator coefficient norms. Complex
/// mode keeps everything and only reports residuals. Returns the accepted
/// and rejected lists.
pub fn verify_roots(
    roots: &[Root],
    sys: &PolySystem,
    mode: Mode,
    settings: &ExtractSettings,
) -> (Vec<Root>, Vec<Root>) {
    let scale = sys
        .generators()
        .iter()
        .map(|h| h.max_coeff())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let residual_gate = settings.residual_tol * scale;

    let mut kept = Vec::new();
    let mut rejected = Vec::new();
    for root in roots {
        match mode {
            Mode::Complex => {
                kept.push(root.clone());
            }
            Mode::Real => {
                let imag_gate = settings.imag_tol * (1.0 + root.max_abs_coord());
                if root.max_imag() > imag_gate {
                    rejected.push(root.clone());
                    continue;
                }
                let mut v = root.real_coordinates();
                if settings.refine {
                    if let Some(better) = newton_polish(sys, &v) {
                        let before = system_residual(
                            sys,
                            &v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>(),
                        );
                        let after = system_residual(
                            sys,
                            &better
                                .iter()
                                .map(|&x| Complex64::new(x, 0.0))
                                .collect::<Vec<_>>(),
                        );
                        if after < before {
                            v = better;
                        }
                    }
                }
                let vc: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                let residual = system_residual(sys, &vc);
                let mut out = root.clone();
                out.coordinates = v.iter().map(|&x| (x, 0.0)).collect();
                out.residual = residual;
                out.is_real = true;
                if residual <= residual_gate {
                    kept.push(out);
                } else {
                    rejected.push(out);
                }
            }
        }
    }
    (kept, rejected)
}

// One Newton step on a square subsystem: the n generators of largest
// leading coefficient. Failure (singular Jacobian, fewer generators than
// variables) skips the polish.
fn newton_polish(sys: &PolySystem, v: &[f64]) -> Option<Vec<f64>> {
    let n = sys.num_vars();
    let mut gens: Vec<_> = sys.generators().iter().collect();
    if gens.len() < n {
        return None;
    }
    gens.sort_by(|a, b| {
        let la = a.leading().map(|(_, c)| c.abs()).unwrap_or(0.0);
        let lb = b.leading().map(|(_, c)| c.abs()).unwrap_or(0.0);
        lb.partial_cmp(&la).unwrap()
    });
    let active = &gens[..n];
    let mut jac = DenseMatrix::zeros(n, n);
    let mut rhs = vec![0.0; n];
    for (i, h) in active.iter().enumerate() {
        rhs[i] = -h.eval(v);
        for j in 0..n {
            jac.set(i, j, h.differentiate(j).eval(v));
        }
    }
    let (dx, _) = crate::linalg::lstsq(&jac, &rhs, &crate::linalg::RankTolerance::default());
    let step: f64 = dx.iter().map(|d| d * d).sum::<f64>().sqrt();
    if !step.is_finite() {
        return None;
    }
    Some(v.iter().zip(&dx).map(|(x, d)| x + d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RankTolerance;
    use crate::poly::{monomials_up_to, Monomial, Polynomial};
    use crate::quotient::{border_basis, multiplication_matrices, select_basis_greedy};

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn univariate_two_roots() {
        // x^2 - 1: eigenvalues of [[0,1],[1,0]] are +/- 1
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(1, [(m(&[2]), 1.0), (m(&[0]), -1.0)])],
        )
        .unwrap();
        let columns = monomials_up_to(1, 2);
        let y = DenseMatrix::from_rows(vec![vec![1.0, 1.0, 1.0], vec![1.0, -1.0, 1.0]]);
        let tol = RankTolerance::default();
        let qb = select_basis_greedy(&y, &columns, 3, &tol).unwrap();
        let bb = border_basis(&qb, 2, &tol).unwrap();
        let ms = multiplication_matrices(&qb, &bb).unwrap();
        let roots = extract_roots(&ms, &qb, &sys, &ExtractSettings::default()).unwrap();
        assert_eq!(roots.len(), 2);
        let mut vals: Vec<f64> = roots.iter().map(|r| r.coordinates[0].0).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] + 1.0).abs() < 1e-10);
        assert!((vals[1] - 1.0).abs() < 1e-10);
        for r in &roots {
            assert!(r.residual < 1e-12);
            assert!(r.is_real);
        }
    }

    #[test]
    fn nilpotent_multiple_root_cluster() {
        // ideal (x^2, xy, y^2): basis {1, x, y}, all border projections 0;
        // the triple root at the origin comes out as one cluster of size 3
        let sys = PolySystem::new(
            2,
            vec![
                Polynomial::monomial(m(&[2, 0]), 1.0),
                Polynomial::monomial(m(&[1, 1]), 1.0),
                Polynomial::monomial(m(&[0, 2]), 1.0),
            ],
        )
        .unwrap();
        let columns = monomials_up_to(2, 2);
        // evaluation rows: the dual basis of 1, x, y at the origin
        // (derivatives), i.e. kernel of the coefficient matrix of degree-2
        // monomials: functionals supported on 1, x, y coordinates
        let mut y = DenseMatrix::zeros(3, columns.len());
        y.set(0, 0, 1.0);
        y.set(1, 1, 1.0);
        y.set(2, 2, 1.0);
        let tol = RankTolerance::default();
        let qb = select_basis_greedy(&y, &columns, columns.len(), &tol).unwrap();
        assert_eq!(qb.monomials.len(), 3);
        let bb = border_basis(&qb, 2, &tol).unwrap();
        let ms = multiplication_matrices(&qb, &bb).unwrap();
        assert_eq!(ms.commutativity_error, 0.0);
        let roots = extract_roots(&ms, &qb, &sys, &ExtractSettings::default()).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].cluster_size, 3);
        assert!(roots[0].coordinates[0].0.abs() < 1e-9);
        assert!(roots[0].coordinates[1].0.abs() < 1e-9);
    }

    #[test]
    fn complex_pair_extraction() {
        // x^2 + 1: basis {1, x}, X = [[0,-1],[1,0]], roots +/- i
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(1, [(m(&[2]), 1.0), (m(&[0]), 1.0)])],
        )
        .unwrap();
        let columns = monomials_up_to(1, 2);
        // evaluations at +i and -i: real/imag split rows
        let y = DenseMatrix::from_rows(vec![vec![1.0, 0.0, -1.0], vec![0.0, 1.0, 0.0]]);
        let tol = RankTolerance::default();
        let qb = select_basis_greedy(&y, &columns, 3, &tol).unwrap();
        let bb = border_basis(&qb, 2, &tol).unwrap();
        let ms = multiplication_matrices(&qb, &bb).unwrap();
        let roots = extract_roots(&ms, &qb, &sys, &ExtractSettings::default()).unwrap();
        assert_eq!(roots.len(), 2);
        let mut ims: Vec<f64> = roots.iter().map(|r| r.coordinates[0].1).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-9);
        assert!((ims[1] - 1.0).abs() < 1e-9);
        for r in &roots {
            assert!(!r.is_real);
            assert!(r.residual < 1e-9);
        }
    }

    #[test]
    fn real_mode_rejects_imaginary() {
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(1, [(m(&[2]), 1.0), (m(&[0]), 1.0)])],
        )
        .unwrap();
        let root = Root {
            coordinates: vec![(0.0, 1.0)],
            residual: 0.0,
            is_real: false,
            cluster_size: 1,
        };
        let settings = ExtractSettings {
            imag_tol: 1e-4,
            ..Default::default()
        };
        let (kept, rejected) = verify_roots(&[root], &sys, Mode::Real, &settings);
        assert!(kept.is_empty());
        assert_eq!(rejected.len(), 1);
    }

    #[test]
    fn newton_polish_improves() {
        // root of x^2 - 2 near 1.414
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(1, [(m(&[2]), 1.0), (m(&[0]), -2.0)])],
        )
        .unwrap();
        let rough = Root {
            coordinates: vec![(1.4, 0.0)],
            residual: 0.04,
            is_real: true,
            cluster_size: 1,
        };
        let settings = ExtractSettings {
            residual_tol: 1e-3,
            ..Default::default()
        };
        let (kept, _) = verify_roots(&[rough], &sys, Mode::Real, &settings);
        assert_eq!(kept.len(), 1);
        assert!((kept[0].coordinates[0].0 - 2.0f64.sqrt()).abs() < 1e-3);
        assert!(kept[0].residual < 1e-3);
    }

    #[test]
    fn commutativity_gate_blocks_extraction() {
        let sys = PolySystem::new(
            2,
            vec![Polynomial::monomial(m(&[1, 0]), 1.0)],
        )
        .unwrap();
        let qb_cols = monomials_up_to(2, 1);
        let y = DenseMatrix::identity(3);
        let tol = RankTolerance::default();
        let qb = select_basis_greedy(&y, &qb_cols, 3, &tol).unwrap();
        let ms = MultiplicationSystem {
            matrices: vec![
                DenseMatrix::from_rows(vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]]),
                DenseMatrix::from_rows(vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]),
            ],
            commutativity_error: 0.5,
        };
        let err = extract_roots(&ms, &qb, &sys, &ExtractSettings::default());
        assert!(matches!(err, Err(Error::CommutativityGate { .. })));
    }
}

#[cfg(test)]
mod eigenvector_structure {
    use crate::linalg::{clustered_schur, DenseMatrix};

    // For a simple root v, the invariant subspace of the combination matrix
    // is spanned by the monomial evaluation vector (b(v))_{b in B}.
    #[test]
    fn schur_vector_matches_monomial_evaluations() {
        // basis {1, x} for (x^2 - 1); adjoint multiplication matrix
        let x1t = DenseMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let clusters = clustered_schur(&x1t, 1e-8).unwrap();
        assert_eq!(clusters.len(), 2);
        for cl in clusters {
            let v = cl.mean.re;
            // expected direction (1, v) normalized
            let norm = (1.0 + v * v).sqrt();
            let expect = [1.0 / norm, v / norm];
            let got = [cl.basis.get(0, 0), cl.basis.get(1, 0)];
            let sign = if got[0] * expect[0] >= 0.0 { 1.0 } else { -1.0 };
            for (g, e) in got.iter().zip(expect) {
                assert!(
                    (g * sign - e).abs() < 1e-5,
                    "eigenvector {:?} vs {:?}",
                    got,
                    expect
                );
            }
        }
    }
}
