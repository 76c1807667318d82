//! Low-rank ADI solvers for large sparse nonsymmetric algebraic Riccati equations
//!
//! ```text
//! A X Ê + E X Â − E X B̂ C X Ê + B Ĉ = 0
//! ```
//!
//! The solution is returned in factored form `X ≈ V X̄ Ŵᵀ` with block-diagonal `X̄`.
//! [`nradi::nradi_solve`] runs the SMW-based iteration, [`unradi::unradi_solve`] the
//! SMW-free variant built on Cholesky-factor ADI. Shifts are supplied or generated
//! automatically from dominant poles ([`shifts`]). The [`oracle`] module holds dense
//! reference solvers and the verification report used to certify small solves.

// `!(x < tol)` is used on purpose so NaN fails the test
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod linalg;
pub mod nradi;
pub mod oracle;
pub mod problem;
pub mod shifts;
pub mod unradi;

pub use error::{Error, Result};
pub use faer::{c64, Mat, MatRef};
pub use linalg::{DenseBlock, SparseMatrix};
pub use nradi::{
    densify_solution, nradi_solve, Algorithm, Case, CaseShifts, ConvergenceRecord, LowRankSolution, ShiftOrigin,
    ShiftPlan, ShiftSequence, SolverConfig,
};
pub use problem::{embed_lyapunov, embed_sylvester, gen_heat, NareProblem};
pub use unradi::unradi_solve;

/// Run the algorithm selected in `cfg`.
pub fn solve(p: &NareProblem, cfg: &SolverConfig, plan: &ShiftPlan) -> Result<(LowRankSolution, ConvergenceRecord)> {
    match cfg.algorithm {
        Algorithm::Nradi => nradi_solve(p, cfg, plan),
        Algorithm::Unradi => unradi_solve(p, cfg, plan).map(|(s, r, _)| (s, r)),
    }
}
