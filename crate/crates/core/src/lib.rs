//! Numeric solver for the real variety of a polynomial ideal.
//!
//! Given generators `h_1, ..., h_m` of an ideal with finitely many real
//! roots (the complex variety may be infinite), the solver finds every real
//! root together with a border basis of an ideal nested between the input
//! ideal and its real radical. The real-root pipeline per prolongation
//! order `t`:
//!
//! 1. prolong the generators to degree `t` and take the space of linear
//!    functionals vanishing on them;
//! 2. pick a maximum-rank positive semidefinite moment matrix over that
//!    space (a small dense SDP with facial reduction); its kernel
//!    polynomials lie in the real radical;
//! 3. append the prolongations of those kernel polynomials and test
//!    dimension equalities on projections of the kernel of the combined
//!    coefficient matrix;
//! 4. on success select a monomial basis of the quotient ring, build the
//!    border basis and multiplication matrices, and read the roots off a
//!    reordered Schur factorization; otherwise increase `t`.
//!
//! A complex-root mode (skip the SDP) and a moment-matrix rank stopping
//! rule are included for cross-validation; stopping rules and basis
//! selection are picked at runtime through [`strategy::StrategyRegistry`].

pub mod config;
pub mod error;
pub mod extract;
pub mod linalg;
pub mod moment;
pub mod poly;
pub mod pp;
pub mod quotient;
pub mod sdp;
pub mod sdp_bridge;
pub mod strategy;

pub use config::{Mode, Policy, SolveConfig};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, RankTolerance};
pub use poly::{Monomial, PolySystem, Polynomial};
pub use pp::{solve, Outcome, SolveResult};
