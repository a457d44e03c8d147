//! Solver configuration.

use crate::linalg::RankTolerance;
pub use crate::moment::VarietyMode as Mode;

/// Which `s` range the stopping rules may fire in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Policy {
    /// `D <= s <= floor(t/2)`: every fired order certifies the full result.
    Strict,
    /// `1 <= s <= t` (rank rule: `<= floor(t/2)`). Orders with `s < D` are
    /// flagged and the extracted roots must pass verification against the
    /// original generators.
    Extended,
}

/// Interior-point and facial-reduction parameters for the moment SDP.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SdpParams {
    /// Duality gap target, relative to `1 + |primal| + |dual|`.
    pub gap_tol: f64,
    /// Iteration cap per interior-point solve.
    pub max_iters: usize,
    /// Eigenvalues of the trace-normalized moment matrix below this are
    /// treated as numerically zero when deciding whether to reduce a face.
    pub face_tol: f64,
    /// External SDP backend command (see `sdp_bridge`); the built-in
    /// interior point is used when unset.
    pub backend_command: Option<String>,
}

impl Default for SdpParams {
    fn default() -> Self {
        SdpParams {
            gap_tol: 5e-13,
            max_iters: 200,
            face_tol: 1e-7,
            backend_command: None,
        }
    }
}

/// Everything the solve loop needs to know.
#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub mode: Mode,
    /// Stopping rule name from the registry: "dims", "rank", or "both".
    pub criterion: String,
    /// Basis selection strategy name: "greedy" or "pivots".
    pub basis: String,
    pub policy: Policy,
    /// Starting prolongation order; defaults to the max generator degree.
    pub t_start: Option<usize>,
    /// Hard cap on the prolongation order; defaults to `t_start + 8`.
    pub t_max: Option<usize>,
    /// Orders to keep computing past the first fired stopping rule.
    pub t_extra: usize,
    pub rank_tol: RankTolerance,
    /// Imaginary-part gate for accepting a root as real, scaled by `1+|v|`.
    pub imag_tol: f64,
    /// Residual gate for verified roots, scaled by the largest generator
    /// coefficient magnitude.
    pub residual_tol: f64,
    /// Eigenvalue clustering width for root extraction, scaled by `1+||A||`.
    pub cluster_tol: f64,
    /// Gate on the multiplication-matrix commutativity error, scaled by
    /// `max_i ||X_i||`; extraction aborts beyond it.
    pub commutativity_gate: f64,
    /// One Newton polish step on extracted real roots.
    pub refine: bool,
    pub seed: u64,
    pub sdp: SdpParams,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            mode: Mode::Real,
            criterion: "dims".into(),
            basis: "greedy".into(),
            policy: Policy::Extended,
            t_start: None,
            t_max: None,
            t_extra: 0,
            rank_tol: RankTolerance::default(),
            imag_tol: 1e-6,
            residual_tol: 1e-4,
            cluster_tol: 1e-3,
            commutativity_gate: 1e-5,
            refine: true,
            seed: 20100815,
            sdp: SdpParams::default(),
        }
    }
}

impl SolveConfig {
    pub fn complex() -> Self {
        SolveConfig {
            mode: Mode::Complex,
            ..Default::default()
        }
    }
}
