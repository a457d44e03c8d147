//! Maximum-rank positive semidefinite element of the moment cone.
//!
//! The cone is `{ L in ker(H_t) : M_{floor(t/2)}(L) PSD }`. A generic
//! (relative-interior) element is found by repeating:
//!
//! 1. maximize the smallest eigenvalue of the trace-normalized moment
//!    matrix over the current face with a dense primal-dual interior-point
//!    method (Mehrotra predictor-corrector, HKM direction);
//! 2. if the optimum is numerically zero, the near-null eigenvectors of
//!    the optimal matrix belong to the kernel of every feasible matrix;
//!    fix them as linear constraints (facial reduction) and re-solve on
//!    the face.
//!
//! The loop ends with a strictly positive optimum on the face (the returned
//! element has maximum rank) or with the zero face (the cone is trivial,
//! which signals a possibly empty real variety and is not an error).

use crate::config::SdpParams;
use crate::error::{Error, Result};
use crate::linalg::{
    nullspace_basis, numeric_rank, symmetric_eig, DenseMatrix, RankTolerance,
};
use crate::moment::{moment_matrix, LinearFunctional};
use crate::poly::{MonomialBasis, PolySystem, Polynomial};

/// The linear-algebra data of the cone at one prolongation order.
pub struct MomentConeProblem {
    pub t: usize,
    pub n: usize,
    /// `floor(t/2)`, the moment matrix order.
    pub moment_order: usize,
    /// Orthonormal rows spanning `ker H_t`, coordinates over the degree-`t`
    /// graded basis.
    pub kernel_basis: DenseMatrix,
    pub basis_t: MonomialBasis,
    /// Ideal members of degree at most `floor(t/2)` (prolonged generators).
    /// They lie in the kernel of every feasible moment matrix exactly, so
    /// facial reduction starts from them.
    pub ideal_seeds: Vec<Polynomial>,
}

/// Build the cone data: the kernel of the `H_t` coefficient matrix.
pub fn build_cone_problem(
    sys: &PolySystem,
    t: usize,
    tol: &RankTolerance,
) -> Result<MomentConeProblem> {
    let ht = crate::moment::h_system(sys, t)?;
    let kernel_basis = nullspace_basis(&ht.matrix, tol)?;
    let half = t / 2;
    let ideal_seeds = ht
        .generators
        .iter()
        .filter(|pg| pg.poly.degree() <= half)
        .map(|pg| pg.poly.clone())
        .collect();
    Ok(MomentConeProblem {
        t,
        n: sys.num_vars(),
        moment_order: t / 2,
        kernel_basis,
        basis_t: MonomialBasis::new(sys.num_vars(), t),
        ideal_seeds,
    })
}

/// A generic element of the cone together with its moment matrix data.
#[derive(Clone, Debug)]
pub struct GenericSolution {
    pub functional: LinearFunctional,
    /// `M_{floor(t/2)}(L*)`, trace-normalized when nonzero.
    pub moment_matrix: DenseMatrix,
    /// `rank M_s(L*)` for `s = 0..=floor(t/2)`.
    pub rank_profile: Vec<usize>,
    /// Orthonormal kernel vectors of the moment matrix re-expressed as
    /// polynomials, scaled so the largest coefficient is 1.
    pub kernel_polys: Vec<Polynomial>,
    pub face_reductions: usize,
    /// Eigenvalues of the final moment matrix, ascending.
    pub spectrum: Vec<f64>,
    /// Set when the spectrum had no clear (10x) gap at the rank cut.
    pub ambiguous_gap: bool,
    /// Interior-point iterations summed over facial reduction rounds.
    pub ip_iterations: usize,
}

impl GenericSolution {
    pub fn max_rank(&self) -> usize {
        *self.rank_profile.last().unwrap_or(&0)
    }
}

/// Rank profile of the leading principal moment matrices.
pub fn rank_profile(sol: &GenericSolution, tol: &RankTolerance) -> Result<Vec<usize>> {
    let l = &sol.functional;
    let s0 = l.order() / 2;
    let mut out = Vec::with_capacity(s0 + 1);
    for s in 0..=s0 {
        let ms = moment_matrix(l, s)?;
        out.push(numeric_rank(&ms, tol)?.rank);
    }
    Ok(out)
}

/// Find a generic (maximum-rank) element of the cone.
pub fn generic_element(
    prob: &MomentConeProblem,
    tol: &RankTolerance,
    params: &SdpParams,
) -> Result<GenericSolution> {
    generic_element_seeded(prob, tol, params, &[])
}

/// Generic element with known kernel polynomials carried over from a lower
/// prolongation order. Kernels nest as `t` grows, so previously certified
/// polynomials of degree at most `floor(t/2)` seed the facial reduction
/// exactly, together with the prolonged ideal members of that degree.
///
/// The reduction is iterated to a fixed point: when a pass discovers kernel
/// directions beyond its seeds, the refined kernel re-seeds a fresh pass.
/// Re-seeding anchors the faces on machine-clean constraints, which makes
/// the outcome independent of the interior-point trajectory.
pub fn generic_element_seeded(
    prob: &MomentConeProblem,
    tol: &RankTolerance,
    params: &SdpParams,
    carried_kernel: &[Polynomial],
) -> Result<GenericSolution> {
    let monotone = |profile: &[usize]| profile.windows(2).all(|w| w[1] >= w[0]);
    let mut carried: Vec<Polynomial> = carried_kernel.to_vec();
    let mut last: Option<GenericSolution> = None;
    for restart in 0..3 {
        let sol = generic_element_pass(prob, tol, params, &carried)?;
        match &last {
            None => {
                let grew_past_seeds = sol.kernel_polys.len() > carried.len();
                carried = sol.kernel_polys.clone();
                last = Some(sol);
                if !grew_past_seeds {
                    break;
                }
            }
            Some(prev) => {
                // a restart must confirm or extend the kernel; a collapse to
                // the zero face or a non-monotone profile means its seeds
                // (extracted at finite precision) over-constrained a face
                // the previous pass had certified
                let acceptable = sol.max_rank() > 0
                    && monotone(&sol.rank_profile)
                    && sol.kernel_polys.len() >= prev.kernel_polys.len();
                if !acceptable {
                    break;
                }
                let stable = sol.kernel_polys.len() == prev.kernel_polys.len();
                carried = sol.kernel_polys.clone();
                last = Some(sol);
                if stable || restart == 2 {
                    break;
                }
            }
        }
    }
    Ok(last.expect("at least one pass"))
}

fn generic_element_pass(
    prob: &MomentConeProblem,
    tol: &RankTolerance,
    params: &SdpParams,
    carried_kernel: &[Polynomial],
) -> Result<GenericSolution> {
    let s0 = prob.moment_order;
    let basis_s0 = MonomialBasis::new(prob.n, s0);
    let d = basis_s0.len();
    let m_params = prob.kernel_basis.rows;

    if m_params == 0 {
        return zero_solution(prob, tol, 0, 0);
    }

    // Moment matrix of each kernel-basis functional.
    let mut eff_mats = Vec::with_capacity(m_params);
    for k in 0..m_params {
        let l = LinearFunctional::new(prob.n, prob.t, prob.kernel_basis.row(k).to_vec());
        eff_mats.push(moment_matrix(&l, s0)?);
    }
    let mat_of = |lambda: &[f64]| -> DenseMatrix {
        let mut m = DenseMatrix::zeros(d, d);
        for (k, c) in lambda.iter().enumerate() {
            if *c != 0.0 {
                m.axpy(*c, &eff_mats[k]);
            }
        }
        m
    };
    let traces: Vec<f64> = eff_mats.iter().map(|b| b.trace()).collect();
    let trace_scale = traces.iter().fold(0.0f64, |a, &t| a.max(t.abs()));
    if trace_scale <= 1e-12 {
        // trace M is identically zero on the cone: only the zero matrix is PSD
        return zero_solution(prob, tol, 0, 0);
    }

    // Exact starting kernel: ideal members and carried-over kernel
    // polynomials, orthonormalized over the degree-s0 basis.
    let mut null_dirs: Vec<Vec<f64>> = Vec::new(); // vectors of R^d
    {
        let mut seed_rows: Vec<Vec<f64>> = Vec::new();
        for p in prob.ideal_seeds.iter().chain(carried_kernel.iter()) {
            if p.degree() <= s0 {
                if let Ok(vek) = p.coefficient_vector(&basis_s0) {
                    seed_rows.push(vek);
                }
            }
        }
        if !seed_rows.is_empty() {
            let seed_mat = DenseMatrix::from_rows(seed_rows);
            let basis = crate::linalg::row_space_basis(&seed_mat, tol)?;
            for row in 0..basis.rows {
                null_dirs.push(basis.row(row).to_vec());
            }
        }
    }
    let mut constraints: Vec<Vec<f64>> = constraint_rows(&eff_mats, &null_dirs);
    let mut face_reductions = 0usize;
    let mut ip_iterations = 0usize;

    // Constraint systems use a tolerance of their own: rows are unit
    // normalized, so the nullspace cut must sit above the achieved
    // null-direction residual (tracked per round) and below the violation
    // scale of a genuinely positive direction.
    let mut tol_face = RankTolerance {
        relative: 1e-10,
        absolute: Some(1e-8),
    };

    loop {
        // Affine parametrization { lambda0 + F^T mu } of the constraint set
        // intersected with trace = 1. Feasibility of the trace slice is
        // decided by how much trace the constraint null space can reach,
        // which is insensitive to the small noise on the constraint rows.
        let (lambda0, f) = if constraints.is_empty() {
            let tnorm2: f64 = traces.iter().map(|v| v * v).sum();
            let lambda0: Vec<f64> = traces.iter().map(|v| v / tnorm2).collect();
            let trow = DenseMatrix::from_rows(vec![traces.clone()]);
            (lambda0, nullspace_basis(&trow, &tol_face)?)
        } else {
            let cmat = DenseMatrix::from_rows(constraints.clone());
            let f0 = nullspace_basis(&cmat, &tol_face)?;
            // achievable trace per null direction
            let tau: Vec<f64> = (0..f0.rows)
                .map(|j| f0.row(j).iter().zip(&traces).map(|(a, b)| a * b).sum())
                .collect();
            let tau_norm2: f64 = tau.iter().map(|v| v * v).sum();
            if tau_norm2.sqrt() <= 1e-7 * trace_scale {
                // the face forces trace M = 0: only the zero matrix is PSD
                return zero_solution(prob, tol, face_reductions, ip_iterations);
            }
            let mut lambda0 = vec![0.0; m_params];
            for (j, &tj) in tau.iter().enumerate() {
                let c = tj / tau_norm2;
                for (l0, fj) in lambda0.iter_mut().zip(f0.row(j)) {
                    *l0 += c * fj;
                }
            }
            // directions inside the face with zero trace
            let mut rows = constraints.clone();
            rows.push(traces.clone());
            let cmat_full = DenseMatrix::from_rows(rows);
            (lambda0, nullspace_basis(&cmat_full, &tol_face)?)
        };
        let free = f.rows;

        // Face compression basis V (columns orthonormal to the null dirs).
        let v = if null_dirs.is_empty() {
            DenseMatrix::identity(d)
        } else {
            let u = DenseMatrix::from_rows(null_dirs.clone());
            nullspace_basis(&u, tol)?.transpose()
        };
        let r = v.cols;
        if r == 0 {
            return zero_solution(prob, tol, face_reductions, ip_iterations);
        }

        let compress = |m: &DenseMatrix| -> DenseMatrix {
            let mv = m.matmul(&v);
            v.transpose().matmul(&mv)
        };
        let c0 = compress(&mat_of(&lambda0));
        let dirs: Vec<DenseMatrix> = (0..free).map(|j| compress(&mat_of(f.row(j)))).collect();

        let ip = match &params.backend_command {
            Some(cmd) => {
                let y = crate::sdp_bridge::solve_external(cmd, &c0, &dirs)?;
                IpSolution {
                    objective: *y.last().unwrap(),
                    y,
                    gap: 0.0,
                    iterations: 0,
                }
            }
            None => solve_max_min_eig(&c0, &dirs, params)?,
        };
        ip_iterations += ip.iterations;
        let gamma = ip.objective;
        let debug = std::env::var("REALVAR_SDP_DEBUG").is_ok();
        if debug {
            eprintln!(
                "[sdp t={} round {}] r={} free={} gamma={:.3e} gap={:.3e} iters={}",
                prob.t, face_reductions, r, free, gamma, ip.gap, ip.iterations
            );
        }
        let lambda_star = {
            let mut l = lambda0.clone();
            for j in 0..free {
                for (li, fj) in l.iter_mut().zip(f.row(j)) {
                    *li += ip.y[j] * fj;
                }
            }
            l
        };

        let gap_scale = ip.gap.abs();
        // Eigenvalues on degenerate (non-strictly-complementary) directions
        // decay like sqrt(mu), so a positive objective certifies a genuine
        // interior only above the sqrt-gap scale.
        let face_compressed = {
            let mut m = c0.clone();
            for (j, dmat) in dirs.iter().enumerate() {
                m.axpy(ip.y[j], dmat);
            }
            m
        };
        let (eigs, vecs) = symmetric_eig(&face_compressed)?;
        let lmax = eigs.last().cloned().unwrap_or(0.0).max(1e-300);
        let positive_gate = params
            .face_tol
            .max(10.0 * (gap_scale * lmax).sqrt());
        if gamma > positive_gate {
            // Interior of the face reached. The combinatorial decision (how
            // many null directions) is settled; refine the directions to
            // machine precision against the now well-separated spectrum
            // before assembling the solution.
            let lambda_polished = polish_null_space(
                &eff_mats,
                &traces,
                &lambda_star,
                &mut null_dirs,
                debug,
            );
            return finish_solution(
                prob,
                tol,
                &lambda_polished,
                &prob.kernel_basis,
                face_reductions,
                ip_iterations,
            );
        }
        if gamma < -10.0 * params.face_tol {
            // the trace-1 slice holds no PSD matrix at all
            return zero_solution(prob, tol, face_reductions, ip_iterations);
        }

        // Facial reduction. The eigenvalues of the face-compressed optimum
        // split into a null group — the gap noise floor together with the
        // whole sqrt-gap zone, where degenerate directions are pinned — and
        // the genuinely positive rest. Eigenvalues perturb at the gap scale
        // (not gap over separation), so this count is reliable even when
        // the eigenvectors are not; the final polish restores the vectors.
        let thr = (100.0 * gap_scale)
            .max(10.0 * gamma.max(0.0))
            .max(10.0 * (gap_scale * lmax).sqrt())
            .min(1e-3 * lmax);
        if debug {
            let show: Vec<String> = eigs.iter().take(20).map(|e| format!("{:.2e}", e)).collect();
            eprintln!("    face spectrum (bottom) {:?} thr {:.2e}", show, thr);
        }
        let mut cut_count = (0..r).take_while(|&i| eigs[i] <= thr).count();
        if cut_count == 0 {
            // gamma sits at the zero level yet nothing separated: fix the
            // single smallest direction and let the next round decide
            cut_count = 1;
        }
        let nulled_scale = eigs[..cut_count]
            .iter()
            .fold(gap_scale, |acc, &e| acc.max(e.abs()));
        let kept_bottom = if cut_count < r { eigs[cut_count] } else { lmax };
        for i in 0..cut_count {
            let v_face: Vec<f64> = (0..r).map(|row| vecs.get(row, i)).collect();
            null_dirs.push(v.matvec(&v_face));
        }
        // The extracted directions mix with the kept eigenspace at roughly
        // nulled/kept (Davis-Kahan); the constraint nullspace cut must sit
        // above the violations that noise induces on true face points.
        let dir_err = (nulled_scale / kept_bottom.max(1e-300)).max(1e-10);
        let old_abs = tol_face.absolute.unwrap_or(1e-8);
        tol_face.absolute = Some(old_abs.max((10.0 * dir_err).min(1e-3)));
        constraints = constraint_rows(&eff_mats, &null_dirs);
        face_reductions += 1;
        if face_reductions > d + 2 {
            return Err(Error::SdpNonConvergence {
                iterations: ip_iterations,
                gap: ip.gap,
                min_eig: gamma,
            });
        }
    }
}

// The cone is trivial: the zero functional is its only (hence generic)
// element; the kernel is the whole truncated polynomial space.
fn zero_solution(
    prob: &MomentConeProblem,
    _tol: &RankTolerance,
    face_reductions: usize,
    ip_iterations: usize,
) -> Result<GenericSolution> {
    let s0 = prob.moment_order;
    let basis_s0 = MonomialBasis::new(prob.n, s0);
    let d = basis_s0.len();
    let kernel_polys = (0..d)
        .map(|i| Polynomial::monomial(basis_s0.at(i).clone(), 1.0))
        .collect();
    Ok(GenericSolution {
        functional: LinearFunctional::zero(prob.n, prob.t),
        moment_matrix: DenseMatrix::zeros(d, d),
        rank_profile: vec![0; s0 + 1],
        kernel_polys,
        face_reductions,
        spectrum: vec![0.0; d],
        ambiguous_gap: false,
        ip_iterations,
    })
}

fn finish_solution(
    prob: &MomentConeProblem,
    tol: &RankTolerance,
    lambda_full: &[f64],
    kernel_basis: &DenseMatrix,
    face_reductions: usize,
    ip_iterations: usize,
) -> Result<GenericSolution> {
    let s0 = prob.moment_order;
    let basis_s0 = MonomialBasis::new(prob.n, s0);

    // L* = sum lambda_k z_k over the degree-t basis
    let cols = kernel_basis.cols;
    let mut values = vec![0.0; cols];
    for (k, &c) in lambda_full.iter().enumerate() {
        if c != 0.0 {
            for (vi, zi) in values.iter_mut().zip(kernel_basis.row(k)) {
                *vi += c * zi;
            }
        }
    }
    let mut l = LinearFunctional::new(prob.n, prob.t, values);
    let mut mm = moment_matrix(&l, s0)?;
    let tr = mm.trace();
    if tr.abs() > 1e-300 {
        let scale = 1.0 / tr;
        l = LinearFunctional::new(prob.n, prob.t, l.values().iter().map(|v| v * scale).collect());
        mm = moment_matrix(&l, s0)?;
    }

    let (eigs, _) = symmetric_eig(&mm)?;
    let kernel_rows = nullspace_basis(&mm, tol)?;
    let kernel_polys: Vec<Polynomial> = (0..kernel_rows.rows)
        .map(|r| {
            Polynomial::from_coefficient_vector(kernel_rows.row(r), &basis_s0).normalized_max_coeff()
        })
        .collect();

    let rank_dec = numeric_rank(&mm, tol)?;
    let ambiguous_gap = rank_dec.gap_ratio().map(|g| g < 10.0).unwrap_or(false);

    let mut sol = GenericSolution {
        functional: l,
        moment_matrix: mm,
        rank_profile: Vec::new(),
        kernel_polys,
        face_reductions,
        spectrum: eigs,
        ambiguous_gap,
        ip_iterations,
    };
    sol.rank_profile = rank_profile(&sol, tol)?;
    Ok(sol)
}

// Final refinement of the null space once the face is combinatorially
// settled and its positive spectrum is well separated: alternate a
// least-squares projection of lambda onto { M(lambda) U = 0, trace = 1 }
// with the exact bottom eigenspace of the projected matrix. The group size
// stays fixed; each pass contracts the direction error by roughly the
// ratio of the null residual to the separation.
fn polish_null_space(
    eff_mats: &[DenseMatrix],
    traces: &[f64],
    lambda_seed: &[f64],
    dirs: &mut [Vec<f64>],
    debug: bool,
) -> Vec<f64> {
    let d = match eff_mats.first() {
        Some(m) => m.rows,
        None => return lambda_seed.to_vec(),
    };
    let kdim = dirs.len();
    let mut lambda = lambda_seed.to_vec();
    if kdim == 0 || kdim >= d {
        return lambda;
    }
    let tol = RankTolerance::relative(1e-10);
    for pass in 0..3 {
        let mut rows = constraint_rows(eff_mats, dirs);
        rows.push(traces.to_vec());
        let a = DenseMatrix::from_rows(rows);
        let mut rhs = vec![0.0; a.rows];
        *rhs.last_mut().unwrap() = 1.0;
        let ax = a.matvec(&lambda);
        let resid: Vec<f64> = rhs.iter().zip(&ax).map(|(b, v)| b - v).collect();
        let (delta, _) = crate::linalg::lstsq(&a, &resid, &tol);
        for (l, dl) in lambda.iter_mut().zip(&delta) {
            *l += dl;
        }
        let mut m = DenseMatrix::zeros(d, d);
        for (k, c) in lambda.iter().enumerate() {
            if *c != 0.0 {
                m.axpy(*c, &eff_mats[k]);
            }
        }
        let Ok((eigs, vecs)) = symmetric_eig(&m) else {
            break;
        };
        for (i, dir) in dirs.iter_mut().enumerate() {
            *dir = (0..d).map(|row| vecs.get(row, i)).collect();
        }
        if debug {
            eprintln!(
                "    final polish pass {}: null top {:.2e} | kept bottom {:.2e}",
                pass,
                eigs[kdim - 1],
                eigs[kdim]
            );
        }
        if eigs[..kdim].iter().all(|e| e.abs() <= 1e-13 * eigs[d - 1].abs().max(1e-300)) {
            break;
        }
    }
    lambda
}

// Rows of the linear system `M(lambda) v = 0 for all v in dirs` over the
// lambda coordinates, unit-normalized.
fn constraint_rows(eff_mats: &[DenseMatrix], dirs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m_params = eff_mats.len();
    let d = eff_mats.first().map(|m| m.rows).unwrap_or(0);
    let mut rows = Vec::new();
    for v in dirs {
        let per_basis: Vec<Vec<f64>> = eff_mats.iter().map(|b| b.matvec(v)).collect();
        for coord in 0..d {
            let row: Vec<f64> = (0..m_params).map(|k| per_basis[k][coord]).collect();
            let norm: f64 = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            // rows near zero are identities already satisfied by the whole
            // parameter space (ideal seeds); normalizing them would turn
            // roundoff into fake constraints
            if norm > 1e-7 {
                rows.push(row.iter().map(|x| x / norm).collect());
            }
        }
    }
    rows
}

/// Outcome of one interior-point solve.
struct IpSolution {
    /// Multipliers for the direction matrices, then the min-eig variable.
    y: Vec<f64>,
    objective: f64,
    gap: f64,
    iterations: usize,
}

/// Maximize `gamma` subject to `C0 + sum_j mu_j D_j - gamma I >= 0` with a
/// feasible-start Mehrotra predictor-corrector on the HKM direction.
///
/// Primal: min <C0, X> s.t. <D_j, X> = 0, <I, X> = 1, X >= 0, which makes
/// `X = I/r` a natural interior starting point.
fn solve_max_min_eig(
    c0: &DenseMatrix,
    dirs: &[DenseMatrix],
    params: &SdpParams,
) -> Result<IpSolution> {
    let r = c0.rows;
    let k = dirs.len();
    let nvars = k + 1;

    // constraint matrices A_i: A_j = -D_j (j < k), A_k = I; b = e_k
    let identity = DenseMatrix::identity(r);
    let a_mat = |i: usize| -> DenseMatrix {
        if i < k {
            dirs[i].scale(-1.0)
        } else {
            identity.clone()
        }
    };
    let mut b = vec![0.0; nvars];
    b[k] = 1.0;

    if k == 0 {
        // unique point: objective is the smallest eigenvalue of C0, and the
        // primal certificate is the projector onto the bottom eigenspace
        let (eigs, vecs) = symmetric_eig(c0)?;
        let _ = vecs;
        let lmin = eigs[0];
        return Ok(IpSolution {
            y: vec![lmin],
            objective: lmin,
            gap: 0.0,
            iterations: 0,
        });
    }

    // strictly feasible start
    let mut x = DenseMatrix::identity(r).scale(1.0 / r as f64);
    let (c0_eigs, _) = symmetric_eig(c0)?;
    let mut y = vec![0.0; nvars];
    y[k] = c0_eigs[0] - 1.0 - c0.max_abs();
    let mut s = c0.clone();
    s.axpy(-y[k], &identity);

    let mut iterations = 0;
    let mut gap = x.dot(&s);
    // Mehrotra bottoms out when the Schur system turns singular at tiny mu;
    // keep the best iterate and accept it if it already met a loose gate.
    let mut best: Option<(Vec<f64>, DenseMatrix, f64)> = None;
    let loose_gate = 1e-7;

    while iterations < params.max_iters {
        iterations += 1;
        let mu = gap / r as f64;

        let chol = (x.cholesky(), s.cholesky());
        let (lx, ls) = match chol {
            (Some(lx), Some(ls)) => (lx, ls),
            _ => break,
        };
        let s_inv = inverse_from_cholesky(&ls);

        // residuals
        let mut rp = vec![0.0; nvars];
        for (i, rpi) in rp.iter_mut().enumerate() {
            *rpi = b[i] - a_mat(i).dot(&x);
        }
        let mut rd = c0.clone();
        for (j, d) in dirs.iter().enumerate() {
            rd.axpy(y[j], d); // -= y_j A_j with A_j = -D_j
        }
        rd.axpy(-y[k], &identity);
        rd = rd.sub(&s);

        // Schur complement H_ij = <A_i, X A_j S^{-1}>
        let t_mats: Vec<DenseMatrix> = (0..nvars)
            .map(|j| x.matmul(&a_mat(j)).matmul(&s_inv))
            .collect();
        let mut h = DenseMatrix::zeros(nvars, nvars);
        for i in 0..nvars {
            let ai = a_mat(i);
            for j in 0..nvars {
                h.set(i, j, ai.dot(&t_mats[j]));
            }
        }
        for i in 0..nvars {
            for j in 0..i {
                let v = 0.5 * (h.get(i, j) + h.get(j, i));
                h.set(i, j, v);
                h.set(j, i, v);
            }
        }

        let x_rd_sinv = x.matmul(&rd).matmul(&s_inv);

        // rhs for a target complementarity W: dX S + X dS = W - X S
        // => H dy = rp_i - <A_i, W S^{-1} - X> + <A_i, X Rd S^{-1}>
        let newton = |w_sinv_minus_x: &DenseMatrix, h: &DenseMatrix| -> Option<(Vec<f64>, DenseMatrix, DenseMatrix)> {
            let mut rhs = vec![0.0; nvars];
            for (i, rhsi) in rhs.iter_mut().enumerate() {
                let ai = a_mat(i);
                *rhsi = rp[i] - ai.dot(w_sinv_minus_x) + ai.dot(&x_rd_sinv);
            }
            let dy = solve_spd_with_ridge(h, &rhs)?;
            let mut ds = rd.clone();
            for (j, d) in dirs.iter().enumerate() {
                ds.axpy(dy[j], d); // -= dy_j A_j
            }
            ds.axpy(-dy[k], &identity);
            // dX = W S^{-1} - X - X dS S^{-1}, then symmetrize
            let mut dx = w_sinv_minus_x.clone();
            dx = dx.sub(&x.matmul(&ds).matmul(&s_inv));
            let dxt = dx.transpose();
            dx = dx.add(&dxt).scale(0.5);
            Some((dy, dx, ds))
        };

        // predictor (sigma = 0): W = 0
        let w0 = x.scale(-1.0);
        let Some((_, dx_aff, ds_aff)) = newton(&w0, &h) else {
            break;
        };

        let alpha_p_aff = max_step(&lx, &dx_aff);
        let alpha_d_aff = max_step(&ls, &ds_aff);
        let mut x_aff = x.clone();
        x_aff.axpy(alpha_p_aff, &dx_aff);
        let mut s_aff = s.clone();
        s_aff.axpy(alpha_d_aff, &ds_aff);
        let mu_aff = x_aff.dot(&s_aff) / r as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(1e-10, 1.0);

        // corrector: W = sigma mu I - dXaff dSaff
        let mut w = dx_aff.matmul(&ds_aff).scale(-1.0);
        w.axpy(sigma * mu, &identity);
        let mut w_sinv = w.matmul(&s_inv);
        w_sinv = w_sinv.sub(&x);
        let Some((dy, dx, ds)) = newton(&w_sinv, &h) else {
            break;
        };

        let alpha_p = (0.98 * max_step(&lx, &dx)).min(1.0);
        let alpha_d = (0.98 * max_step(&ls, &ds)).min(1.0);
        if alpha_p < 1e-6 && alpha_d < 1e-6 {
            break;
        }

        x.axpy(alpha_p, &dx);
        for (yi, dyi) in y.iter_mut().zip(&dy) {
            *yi += alpha_d * dyi;
        }
        s.axpy(alpha_d, &ds);

        gap = x.dot(&s);
        let pobj = c0.dot(&x);
        let dobj = y[k];
        let rp_norm: f64 = rp.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rd_norm = rd.frobenius();
        let feasible = rp_norm <= 1e-8 * (1.0 + b_norm(&b))
            && rd_norm <= 1e-8 * (1.0 + c0.frobenius());
        if feasible && best.as_ref().map(|(_, _, g)| gap < *g).unwrap_or(true) {
            best = Some((y.clone(), x.clone(), gap));
        }
        if feasible && gap.abs() <= params.gap_tol * (1.0 + pobj.abs() + dobj.abs()) {
            // Polish centrality before reporting: pure centering steps at
            // the reached gap drive the iterate toward the analytic center
            // of the optimal face, lifting the genuinely positive part of
            // the spectrum away from the null part. The facial reduction
            // reads its eigenvalue splits off this separation.
            center_iterate(&mut x, &mut y, &mut s, c0, dirs, &b, 6);
            if std::env::var("REALVAR_SDP_DEBUG").is_ok() {
                if let Ok((se, _)) = symmetric_eig(&s) {
                    let show: Vec<String> = se.iter().take(8).map(|e| format!("{:.2e}", e)).collect();
                    eprintln!("    post-center S bottom {:?}", show);
                }
            }
            let gap = x.dot(&s);
            return Ok(IpSolution {
                objective: y[k],
                y,
                gap,
                iterations,
            });
        }
    }
    // numerical stall: take the best feasible iterate if it is already deep
    if let Some((y_best, _x_best, gap_best)) = best {
        if gap_best <= loose_gate {
            return Ok(IpSolution {
                objective: y_best[k],
                y: y_best,
                gap: gap_best,
                iterations,
            });
        }
    }
    Err(Error::SdpNonConvergence {
        iterations,
        gap,
        min_eig: y[k],
    })
}

fn b_norm(b: &[f64]) -> f64 {
    b.iter().map(|v| v * v).sum::<f64>().sqrt()
}

// Pure centering Newton steps (sigma = 1) at the current duality gap,
// pushing the iterate toward the analytic center of its optimal face.
fn center_iterate(
    x: &mut DenseMatrix,
    y: &mut [f64],
    s: &mut DenseMatrix,
    c0: &DenseMatrix,
    dirs: &[DenseMatrix],
    b: &[f64],
    passes: usize,
) {
    let r = c0.rows;
    let k = dirs.len();
    let nvars = k + 1;
    let identity = DenseMatrix::identity(r);
    let a_mat = |i: usize| -> DenseMatrix {
        if i < k {
            dirs[i].scale(-1.0)
        } else {
            identity.clone()
        }
    };
    for _pass in 0..passes {
        let mu = x.dot(s) / r as f64;
        let (lx, ls) = match (x.cholesky(), s.cholesky()) {
            (Some(a), Some(b)) => (a, b),
            _ => return,
        };
        let s_inv = inverse_from_cholesky(&ls);
        let mut rp = vec![0.0; nvars];
        for (i, rpi) in rp.iter_mut().enumerate() {
            *rpi = b[i] - a_mat(i).dot(x);
        }
        let mut rd = c0.clone();
        for (j, d) in dirs.iter().enumerate() {
            rd.axpy(y[j], d);
        }
        rd.axpy(-y[k], &identity);
        let rd = rd.sub(s);

        let t_mats: Vec<DenseMatrix> = (0..nvars)
            .map(|j| x.matmul(&a_mat(j)).matmul(&s_inv))
            .collect();
        let mut h = DenseMatrix::zeros(nvars, nvars);
        for i in 0..nvars {
            let ai = a_mat(i);
            for j in 0..nvars {
                h.set(i, j, ai.dot(&t_mats[j]));
            }
        }
        for i in 0..nvars {
            for j in 0..i {
                let v = 0.5 * (h.get(i, j) + h.get(j, i));
                h.set(i, j, v);
                h.set(j, i, v);
            }
        }
        let x_rd_sinv = x.matmul(&rd).matmul(&s_inv);
        let mut w_sinv_minus_x = s_inv.scale(mu);
        w_sinv_minus_x = w_sinv_minus_x.sub(x);
        let mut rhs = vec![0.0; nvars];
        for (i, rhsi) in rhs.iter_mut().enumerate() {
            let ai = a_mat(i);
            *rhsi = rp[i] - ai.dot(&w_sinv_minus_x) + ai.dot(&x_rd_sinv);
        }
        let Some(dy) = solve_spd_with_ridge(&h, &rhs) else {
            return;
        };
        let mut ds = rd.clone();
        for (j, d) in dirs.iter().enumerate() {
            ds.axpy(dy[j], d);
        }
        ds.axpy(-dy[k], &identity);
        let mut dx = w_sinv_minus_x.clone();
        dx = dx.sub(&x.matmul(&ds).matmul(&s_inv));
        let dxt = dx.transpose();
        let dx = dx.add(&dxt).scale(0.5);
        let ap = (0.9 * max_step(&lx, &dx)).min(1.0);
        let ad = (0.9 * max_step(&ls, &ds)).min(1.0);
        x.axpy(ap, &dx);
        for (yi, dyi) in y.iter_mut().zip(&dy) {
            *yi += ad * dyi;
        }
        s.axpy(ad, &ds);
    }
}

fn inverse_from_cholesky(l: &DenseMatrix) -> DenseMatrix {
    let n = l.rows;
    let mut inv = DenseMatrix::zeros(n, n);
    for col in 0..n {
        let mut e = vec![0.0; n];
        e[col] = 1.0;
        let z = l.solve_lower(&e);
        let z = l.solve_lower_transpose(&z);
        for row in 0..n {
            inv.set(row, col, z[row]);
        }
    }
    // symmetrize
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (inv.get(i, j) + inv.get(j, i));
            inv.set(i, j, v);
            inv.set(j, i, v);
        }
    }
    inv
}

// Largest alpha in (0, 1] with X + alpha dX >= 0, given X = L L^T.
fn max_step(lx: &DenseMatrix, dx: &DenseMatrix) -> f64 {
    let n = lx.rows;
    // M = L^{-1} dX L^{-T}
    let mut m = DenseMatrix::zeros(n, n);
    // columns of dX L^{-T}: solve L W^T = dX^T ... do it row/col wise
    // first Z = L^{-1} dX  (solve L z = dx_col for each column)
    let mut z = DenseMatrix::zeros(n, n);
    for col in 0..n {
        let rhs: Vec<f64> = (0..n).map(|i| dx.get(i, col)).collect();
        let sol = lx.solve_lower(&rhs);
        for row in 0..n {
            z.set(row, col, sol[row]);
        }
    }
    // M = Z L^{-T}: M^T = L^{-1} Z^T
    for col in 0..n {
        let rhs: Vec<f64> = (0..n).map(|i| z.get(col, i)).collect();
        let sol = lx.solve_lower(&rhs);
        for row in 0..n {
            m.set(col, row, sol[row]);
        }
    }
    let mt = m.transpose();
    let msym = m.add(&mt).scale(0.5);
    match crate::linalg::symmetric_eig(&msym) {
        Ok((eigs, _)) => {
            let lmin = eigs[0];
            if lmin >= -1e-14 {
                1.0
            } else {
                (-1.0 / lmin).min(1.0)
            }
        }
        Err(_) => 1e-3,
    }
}

fn solve_spd_with_ridge(h: &DenseMatrix, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = h.rows;
    let scale = h.max_abs().max(1e-300);
    let mut ridge = 0.0;
    for _ in 0..6 {
        let mut hr = h.clone();
        for i in 0..n {
            let v = hr.get(i, i) + ridge * scale;
            hr.set(i, i, v);
        }
        if let Some(l) = hr.cholesky() {
            let z = l.solve_lower(rhs);
            return Some(l.solve_lower_transpose(&z));
        }
        ridge = if ridge == 0.0 { 1e-14 } else { ridge * 100.0 };
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn tol() -> RankTolerance {
        RankTolerance::default()
    }

    #[test]
    fn cone_problem_single_linear_generator() {
        // {x1 - 1} at t = 2: H = {x1 - 1, x1^2 - x1}; kernel is y0 = y1 = y2
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(1, [(m(&[1]), 1.0), (m(&[0]), -1.0)])],
        )
        .unwrap();
        let prob = build_cone_problem(&sys, 2, &tol()).unwrap();
        assert_eq!(prob.kernel_basis.rows, 1);
        let z = prob.kernel_basis.row(0);
        assert!((z[0] - z[1]).abs() < 1e-10);
        assert!((z[1] - z[2]).abs() < 1e-10);
    }

    #[test]
    fn generic_element_point_evaluation() {
        // {x1 - 1}: the cone is the ray of evaluations at 1; rank profile 1,1
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(1, [(m(&[1]), 1.0), (m(&[0]), -1.0)])],
        )
        .unwrap();
        let prob = build_cone_problem(&sys, 2, &tol()).unwrap();
        let sol = generic_element(&prob, &tol(), &SdpParams::default()).unwrap();
        assert_eq!(sol.rank_profile, vec![1, 1]);
        assert!(sol.kernel_polys.is_empty() || sol.kernel_polys.len() == 1);
        // kernel of M_1 is spanned by x - 1
        assert_eq!(sol.kernel_polys.len(), 1);
        let g = &sol.kernel_polys[0];
        let ratio = g.coefficient(&m(&[0])) / g.coefficient(&m(&[1]));
        assert!((ratio + 1.0).abs() < 1e-6, "kernel poly {:?}", g);
    }

    #[test]
    fn generic_element_two_points() {
        // {x1^2 - 1} at t = 4: max rank M_2 = 2, kernel poly prop to x^2 - 1.
        // Oracle: y = (y0, y1, y0, y1, y0) from the H_4 constraints; grid
        // search over the PSD normalization confirms rank 2 is attained.
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(1, [(m(&[2]), 1.0), (m(&[0]), -1.0)])],
        )
        .unwrap();
        let prob = build_cone_problem(&sys, 4, &tol()).unwrap();
        assert_eq!(prob.kernel_basis.rows, 2);
        let sol = generic_element(&prob, &tol(), &SdpParams::default()).unwrap();
        assert_eq!(sol.rank_profile, vec![1, 2, 2]);
        assert_eq!(sol.kernel_polys.len(), 1);
        let g = &sol.kernel_polys[0];
        // proportional to x^2 - 1
        let c2 = g.coefficient(&m(&[2]));
        let c0 = g.coefficient(&m(&[0]));
        let c1 = g.coefficient(&m(&[1]));
        assert!((c0 / c2 + 1.0).abs() < 1e-6);
        assert!((c1 / c2).abs() < 1e-6);
    }

    #[test]
    fn non_gorenstein_psd_kernel() {
        // x1^2, x2^2, x1x2 at t = 2: PSD forces the linear moments to zero,
        // kernel of M_1 spans {x1, x2}, rank profile (1, 1)
        let sys = PolySystem::new(
            2,
            vec![
                Polynomial::monomial(m(&[2, 0]), 1.0),
                Polynomial::monomial(m(&[0, 2]), 1.0),
                Polynomial::monomial(m(&[1, 1]), 1.0),
            ],
        )
        .unwrap();
        let prob = build_cone_problem(&sys, 2, &tol()).unwrap();
        assert_eq!(prob.kernel_basis.rows, 3);
        let sol = generic_element(&prob, &tol(), &SdpParams::default()).unwrap();
        assert_eq!(sol.rank_profile, vec![1, 1]);
        assert_eq!(sol.kernel_polys.len(), 2);
        let basis1 = MonomialBasis::new(2, 1);
        for g in &sol.kernel_polys {
            // supported on x1, x2 only
            assert!(g.coefficient(&basis1.at(0).clone()).abs() < 1e-6);
            assert!(g.degree() == 1);
        }
    }

    #[test]
    fn circle_ideal_kernel() {
        // x1^2 + x2^2 at t = 2: kernel of M_1 spans {x1, x2}
        let sys = PolySystem::new(
            2,
            vec![Polynomial::from_terms(
                2,
                [(m(&[2, 0]), 1.0), (m(&[0, 2]), 1.0)],
            )],
        )
        .unwrap();
        let prob = build_cone_problem(&sys, 2, &tol()).unwrap();
        let sol = generic_element(&prob, &tol(), &SdpParams::default()).unwrap();
        assert_eq!(sol.rank_profile, vec![1, 1]);
        assert_eq!(sol.kernel_polys.len(), 2);
        for g in &sol.kernel_polys {
            assert_eq!(g.degree(), 1);
        }
    }

    #[test]
    fn empty_real_variety_zero_cone() {
        // {x1^2 + 1}: the only PSD element is the zero functional
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(1, [(m(&[2]), 1.0), (m(&[0]), 1.0)])],
        )
        .unwrap();
        let prob = build_cone_problem(&sys, 2, &tol()).unwrap();
        let sol = generic_element(&prob, &tol(), &SdpParams::default()).unwrap();
        assert_eq!(sol.rank_profile, vec![0, 0]);
        assert_eq!(sol.max_rank(), 0);
        // kernel polynomials span everything up to degree 1
        assert_eq!(sol.kernel_polys.len(), 2);
    }

    #[test]
    fn psd_kernel_law_on_generic_solution() {
        // psdker: Ker M_{s0} cap R[x]_s = Ker M_s for s <= s0
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(1, [(m(&[2]), 1.0), (m(&[0]), -1.0)])],
        )
        .unwrap();
        let prob = build_cone_problem(&sys, 6, &tol()).unwrap();
        let sol = generic_element(&prob, &tol(), &SdpParams::default()).unwrap();
        let s0 = 3;
        for s in 1..=s0 {
            let ms = moment_matrix(&sol.functional, s).unwrap();
            let ker_s = nullspace_basis(&ms, &tol()).unwrap();
            // every kernel vector of M_s extends (by zero padding) to one of
            // M_{s0} and vice versa for degree <= s polys
            let expected_dim = ms.rows - sol.rank_profile[s];
            assert_eq!(ker_s.rows, expected_dim, "s = {}", s);
            for r in 0..ker_s.rows {
                let mut padded = vec![0.0; sol.moment_matrix.rows];
                padded[..ker_s.cols].copy_from_slice(ker_s.row(r));
                let img = sol.moment_matrix.matvec(&padded);
                let worst = img.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                assert!(worst < 1e-6, "psdker violated at s={}: {}", s, worst);
            }
        }
    }
}
