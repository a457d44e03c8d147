//! Error type shared across the solver crates.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("prolongation order {t} is below the maximum generator degree {d}")]
    OrderBelowDegree { t: usize, d: usize },

    #[error("SVD did not converge on a {rows}x{cols} matrix")]
    SvdFailure { rows: usize, cols: usize },

    #[error("eigendecomposition failed: {0}")]
    EigFailure(String),

    #[error("matrix is not symmetric: max asymmetry {0:.3e}")]
    NotSymmetric(f64),

    #[error("interior point did not converge after {iterations} iterations (gap {gap:.3e}, min eig {min_eig:.3e})")]
    SdpNonConvergence {
        iterations: usize,
        gap: f64,
        min_eig: f64,
    },

    #[error("moment matrix order {s} exceeds half the functional order {t}")]
    MomentOrder { s: usize, t: usize },

    #[error("kernel polynomial of degree {deg} exceeds the admissible degree {max}")]
    KernelDegree { deg: usize, max: usize },

    #[error("selected monomial basis is not connected to 1: {0}")]
    NotConnectedTo1(String),

    #[error("border projection residual {residual:.3e} exceeds the admissible {bound:.3e} for {monomial}; the stopping conditions were numerically false")]
    BorderResidual {
        monomial: String,
        residual: f64,
        bound: f64,
    },

    #[error("multiplication matrices fail the commutativity gate: c(X) = {c:.3e} > {gate:.3e}")]
    CommutativityGate { c: f64, gate: f64 },

    #[error("root extraction failed: {0}")]
    Extraction(String),

    #[error("unknown strategy '{name}' for {kind}; registered: {known}")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("{0}")]
    Other(String),
}
