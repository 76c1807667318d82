//! Low-rank ADI iteration for the NARE using SMW-corrected shifted solves.

pub mod cases;
pub mod config;
pub(crate) mod driver;
pub mod record;
pub mod smw;
pub mod solution;
pub mod state;
pub mod xblock;

use faer::c64;

pub use cases::{classify_case, Case, CaseShifts, ShiftOrigin, ShiftSequence, SmallBlocks};
pub use config::{Algorithm, SolverConfig};
pub use driver::ShiftPlan;
pub use record::{ConvergenceRecord, RecordRow};
pub use smw::smw_solve;
pub use solution::{densify_solution, LowRankSolution, DENSIFY_CAP};
pub use state::{InterpolationData, NareFactors, ReducedModel};
pub use xblock::compute_x;

use crate::error::Result;
use crate::linalg::dense::{hcat, DenseBlock};
use crate::linalg::{shifted_factorize, spectral_norm_product, SparseMatrix};
use crate::problem::NareProblem;
use driver::{drive, Engine};

/// Running state of the SMW-based iteration.
#[derive(Clone, Debug)]
pub struct NradiState<'p> {
    problem: &'p NareProblem,
    ah_t: SparseMatrix,
    eh_t: SparseMatrix,
    denom: f64,
    pub factors: NareFactors,
}

impl<'p> NradiState<'p> {
    pub fn new(problem: &'p NareProblem) -> Result<Self> {
        problem.validate()?;
        Ok(Self {
            problem,
            ah_t: problem.ah.transpose(),
            eh_t: problem.eh.transpose(),
            denom: spectral_norm_product(problem.b.as_ref(), problem.ch.as_ref())?,
            factors: NareFactors::new(problem),
        })
    }

    /// `(A − K̃C + αE)⁻¹ rhs`
    fn solve_v(&self, alpha: c64, rhs: &DenseBlock) -> Result<DenseBlock> {
        let base = shifted_factorize(&self.problem.a, &self.problem.e, alpha)?;
        smw_solve(&base, self.factors.k_gain.as_ref(), self.problem.c.as_ref(), rhs)
    }

    /// `(Âᵀ − K̄ᵀB̂ᵀ + βÊᵀ)⁻¹ rhs`
    fn solve_w(&self, beta: c64, rhs: &DenseBlock) -> Result<DenseBlock> {
        let base = shifted_factorize(&self.ah_t, &self.eh_t, beta)?;
        smw_solve(&base, self.factors.kh_gain.transpose(), self.problem.bh.transpose(), rhs)
    }

    /// One step: consume the slots of `shifts` and update all factors.
    pub fn step(&mut self, shifts: &CaseShifts) -> Result<()> {
        let p = self.problem;
        let rhs_v = DenseBlock::Real(self.factors.b_perp.clone());
        let rhs_w = DenseBlock::Real(self.factors.c_perp.transpose().to_owned());
        let re_im = |y: DenseBlock| hcat(&[y.real_part().as_ref(), y.imag_part().as_ref()]);
        let real = |x: f64| c64::new(x, 0.0);

        let (v, w) = match *shifts {
            CaseShifts::I { alpha, beta } => (
                self.solve_v(real(alpha), &rhs_v)?.into_real()?,
                self.solve_w(real(beta), &rhs_w)?.into_real()?,
            ),
            CaseShifts::II { alpha, beta } => {
                (re_im(self.solve_v(alpha, &rhs_v)?), re_im(self.solve_w(beta, &rhs_w)?))
            }
            CaseShifts::III { alpha, beta, beta2 } => {
                let z = self.solve_w(real(beta), &rhs_w)?.into_real()?;
                let ez = DenseBlock::Real(self.eh_t.mul_dense(z.as_ref()));
                let z2 = self.solve_w(real(beta2), &ez)?.into_real()?;
                (re_im(self.solve_v(alpha, &rhs_v)?), hcat(&[z.as_ref(), z2.as_ref()]))
            }
            CaseShifts::IV { alpha, alpha2, beta } => {
                let y = self.solve_v(real(alpha), &rhs_v)?.into_real()?;
                let ey = DenseBlock::Real(p.e.mul_dense(y.as_ref()));
                let y2 = self.solve_v(real(alpha2), &ey)?.into_real()?;
                (hcat(&[y.as_ref(), y2.as_ref()]), re_im(self.solve_w(beta, &rhs_w)?))
            }
        };
        self.factors.absorb(p, *shifts, v, w)?;
        Ok(())
    }

    /// `‖B⊥Ĉ⊥‖₂ / ‖BĈ‖₂`; zero when `‖BĈ‖₂ = 0`.
    pub fn relative_residual(&self) -> Result<f64> {
        relative_residual(&self.factors, self.denom)
    }
}

pub fn relative_residual(f: &NareFactors, denom: f64) -> Result<f64> {
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(f.residual_norm()? / denom)
}

/// Convenience wrapper: one step on `state`.
pub fn nradi_step(state: &mut NradiState<'_>, shifts: &CaseShifts) -> Result<()> {
    state.step(shifts)
}

impl Engine for NradiState<'_> {
    fn step(&mut self, shifts: &CaseShifts) -> Result<()> {
        NradiState::step(self, shifts)
    }
    fn factors(&self) -> &NareFactors {
        &self.factors
    }
}

/// Run the SMW-based iteration until the relative residual drops below `cfg.tol`.
pub fn nradi_solve(p: &NareProblem, cfg: &SolverConfig, plan: &ShiftPlan) -> Result<(LowRankSolution, ConvergenceRecord)> {
    cfg.validate(p.m())?;
    let state = NradiState::new(p)?;
    let out = drive(p, cfg, plan, state)?;
    let sol = LowRankSolution::from_factors(out.engine.factors, out.shifts_used, out.converged, out.residual, cfg.emit_interp);
    Ok((sol, out.record))
}

