//! SMW-free variant: plain shifted solves build Cholesky-factor ADI bases `V_lyap, Ŵ_lyap`, and
//! block upper-triangular transforms `T_v, T_w` extract the NARE factors `V = V_lyap T_v`, `Ŵ = Ŵ_lyap T_w`.

pub mod cfadi;

use faer::{c64, Mat, MatRef};

pub use cfadi::{CfadiCaseScalars, CfadiSide};

use crate::error::{Error, Result};
use crate::linalg::dense::{hcat, lift, re, im, solve_small, vcat, DenseBlock};
use crate::linalg::SparseMatrix;
use crate::nradi::cases::is_real;
use crate::nradi::driver::{drive, Engine};
use crate::nradi::{CaseShifts, ConvergenceRecord, LowRankSolution, NareFactors, ShiftPlan, SolverConfig};
use crate::problem::NareProblem;

/// Lyapunov factors `P ≈ V_lyap V_lyapᵀ`, `Q̂ ≈ Ŵ_lyap Ŵ_lyapᵀ` and the transforms onto the NARE factors.
#[derive(Clone, Debug)]
pub struct LyapunovFactors {
    pub v_lyap: Mat<f64>,
    pub w_lyap: Mat<f64>,
    pub t_v: Mat<f64>,
    pub t_w: Mat<f64>,
    pub s_v: Mat<f64>,
    pub l_v: Mat<f64>,
    pub s_w: Mat<f64>,
    pub l_w: Mat<f64>,
    /// `ℬ⊥`, n×m
    pub b_script: Mat<f64>,
    /// `𝒞̂⊥`, m×n̂
    pub c_script: Mat<f64>,
}

/// The small system `(−Sᵀ − [T; 0] G Z_c + σI) t = Lᵀ − [T; 0] R` of one side.
#[derive(Clone, Debug)]
pub struct TransformSystem {
    base: Mat<f64>,
    rhs: Mat<f64>,
}

impl TransformSystem {
    /// `gain_prev` is `X̄ B̂_r` (V side) or `X̄ᵀC_rᵀ` (W side); `rhs_prev` is `B_r` or `Ĉ_rᵀ`.
    pub fn new(side: &CfadiSide, t_prev: MatRef<'_, f64>, gain_prev: MatRef<'_, f64>, rhs_prev: MatRef<'_, f64>) -> Self {
        let r = side.width();
        let pad = vcat(&[t_prev, Mat::<f64>::zeros(r - t_prev.nrows(), t_prev.ncols()).as_ref()]);
        let base = -side.s.transpose() - &pad * gain_prev * &side.coupled;
        let rhs = side.l.transpose() - &pad * rhs_prev;
        Self { base, rhs }
    }

    /// `t = (M + σI)⁻¹ (Lᵀ − [T; 0] R)`
    pub fn solve(&self, sigma: c64) -> Result<DenseBlock> {
        self.solve_with(sigma, &DenseBlock::Real(self.rhs.clone()))
    }

    /// `(M + σI)⁻¹ rhs`; used with the previous `t` for the second real shift of a paired step.
    pub fn solve_with(&self, sigma: c64, rhs: &DenseBlock) -> Result<DenseBlock> {
        let r = self.base.nrows();
        let wrap = |e: Error| Error::Numerical(format!("transform system: {e} (shift spectra collide)"));
        if is_real(sigma) && !rhs.is_complex() {
            let m = Mat::from_fn(r, r, |i, j| self.base[(i, j)] + if i == j { sigma.re } else { 0.0 });
            let rhs = rhs.real_part();
            return solve_small(m.as_ref(), rhs.as_ref(), "transform").map(DenseBlock::Real).map_err(wrap);
        }
        let mut m: Mat<c64> = lift(self.base.as_ref());
        for i in 0..r {
            m[(i, i)] += sigma;
        }
        solve_small(m.as_ref(), rhs.to_complex().as_ref(), "transform").map(DenseBlock::Complex).map_err(wrap)
    }
}

fn re_im(t: &Mat<c64>) -> Mat<f64> {
    hcat(&[re(t.as_ref()).as_ref(), im(t.as_ref()).as_ref()])
}

/// Running state of the SMW-free iteration.
#[derive(Clone, Debug)]
pub struct UnradiState<'p> {
    problem: &'p NareProblem,
    ah_t: SparseMatrix,
    eh_t: SparseMatrix,
    bh_t: Mat<f64>,
    pub v_side: CfadiSide,
    pub w_side: CfadiSide,
    pub t_v: Mat<f64>,
    pub t_w: Mat<f64>,
    pub factors: NareFactors,
}

impl<'p> UnradiState<'p> {
    pub fn new(problem: &'p NareProblem) -> Result<Self> {
        problem.validate()?;
        let pp = problem.p();
        Ok(Self {
            problem,
            ah_t: problem.ah.transpose(),
            eh_t: problem.eh.transpose(),
            bh_t: problem.bh.transpose().to_owned(),
            v_side: CfadiSide::new(problem.b.as_ref(), pp),
            w_side: CfadiSide::new(problem.ch.transpose(), pp),
            t_v: Mat::zeros(0, 0),
            t_w: Mat::zeros(0, 0),
            factors: NareFactors::new(problem),
        })
    }

    fn expand_v(&mut self, sigma: c64) -> Result<()> {
        let p = self.problem;
        self.v_side.expand(&p.a, &p.e, p.c.as_ref(), sigma).map(|_| ())
    }

    fn expand_w(&mut self, sigma: c64) -> Result<()> {
        self.w_side.expand(&self.ah_t, &self.eh_t, self.bh_t.as_ref(), sigma).map(|_| ())
    }

    /// Expand both Lyapunov bases for `shifts` and return the transform systems of this step.
    pub fn expand(&mut self, shifts: &CaseShifts) -> Result<(TransformSystem, TransformSystem)> {
        let real = |x: f64| c64::new(x, 0.0);
        match *shifts {
            CaseShifts::I { alpha, beta } => {
                self.expand_v(real(alpha))?;
                self.expand_w(real(beta))?;
            }
            CaseShifts::II { alpha, beta } => {
                self.expand_v(alpha)?;
                self.expand_w(beta)?;
            }
            CaseShifts::III { alpha, beta, beta2 } => {
                self.expand_w(real(beta))?;
                self.expand_w(real(beta2))?;
                self.expand_v(alpha)?;
            }
            CaseShifts::IV { alpha, alpha2, beta } => {
                self.expand_v(real(alpha))?;
                self.expand_v(real(alpha2))?;
                self.expand_w(beta)?;
            }
        }
        let f = &self.factors;
        let xbar = f.xbar();
        let gain_v = &xbar * &f.bh_r;
        let gain_w = xbar.transpose() * f.c_r.transpose();
        let b_r = &xbar * f.interp.l_w.transpose();
        let ch_r_t = xbar.transpose() * f.interp.l_v.transpose();
        Ok((
            TransformSystem::new(&self.v_side, self.t_v.as_ref(), gain_v.as_ref(), b_r.as_ref()),
            TransformSystem::new(&self.w_side, self.t_w.as_ref(), gain_w.as_ref(), ch_r_t.as_ref()),
        ))
    }

    /// Transform columns `t_v, t_w` of a step from its systems.
    pub fn transforms(shifts: &CaseShifts, sys_v: &TransformSystem, sys_w: &TransformSystem) -> Result<(Mat<f64>, Mat<f64>)> {
        let real = |x: f64| c64::new(x, 0.0);
        Ok(match *shifts {
            CaseShifts::I { alpha, beta } => {
                (sys_v.solve(real(alpha))?.into_real()?, sys_w.solve(real(beta))?.into_real()?)
            }
            CaseShifts::II { alpha, beta } => {
                (re_im(&sys_v.solve(alpha)?.to_complex()), re_im(&sys_w.solve(beta)?.to_complex()))
            }
            CaseShifts::III { alpha, beta, beta2 } => {
                let tw = sys_w.solve(real(beta))?;
                let tw2 = sys_w.solve_with(real(beta2), &tw)?.into_real()?;
                let tw = tw.into_real()?;
                (re_im(&sys_v.solve(alpha)?.to_complex()), hcat(&[tw.as_ref(), tw2.as_ref()]))
            }
            CaseShifts::IV { alpha, alpha2, beta } => {
                let tv = sys_v.solve(real(alpha))?;
                let tv2 = sys_v.solve_with(real(alpha2), &tv)?.into_real()?;
                let tv = tv.into_real()?;
                (hcat(&[tv.as_ref(), tv2.as_ref()]), re_im(&sys_w.solve(beta)?.to_complex()))
            }
        })
    }

    pub fn step(&mut self, shifts: &CaseShifts) -> Result<()> {
        let (sys_v, sys_w) = self.expand(shifts)?;
        let (tv, tw) = Self::transforms(shifts, &sys_v, &sys_w)?;
        let v_i = &self.v_side.basis * &tv;
        let w_i = &self.w_side.basis * &tw;
        self.t_v = extend_triangular(self.t_v.as_ref(), tv.as_ref());
        self.t_w = extend_triangular(self.t_w.as_ref(), tw.as_ref());
        self.factors.absorb(self.problem, *shifts, v_i, w_i)?;
        Ok(())
    }

    pub fn lyapunov_factors(&self) -> LyapunovFactors {
        LyapunovFactors {
            v_lyap: self.v_side.basis.clone(),
            w_lyap: self.w_side.basis.clone(),
            t_v: self.t_v.clone(),
            t_w: self.t_w.clone(),
            s_v: self.v_side.s.clone(),
            l_v: self.v_side.l.clone(),
            s_w: self.w_side.s.clone(),
            l_w: self.w_side.l.clone(),
            b_script: self.v_side.script.clone(),
            c_script: self.w_side.script.transpose().to_owned(),
        }
    }
}

/// `[[T, t_top], [0, t_bottom]]` with `t` split after `T`'s rows.
fn extend_triangular(t_prev: MatRef<'_, f64>, t: MatRef<'_, f64>) -> Mat<f64> {
    let pad = vcat(&[t_prev, Mat::<f64>::zeros(t.nrows() - t_prev.nrows(), t_prev.ncols()).as_ref()]);
    hcat(&[pad.as_ref(), t])
}

impl Engine for UnradiState<'_> {
    fn step(&mut self, shifts: &CaseShifts) -> Result<()> {
        UnradiState::step(self, shifts)
    }
    fn factors(&self) -> &NareFactors {
        &self.factors
    }
}

/// Run the SMW-free iteration; also returns the Lyapunov factors built along the way.
pub fn unradi_solve(
    p: &NareProblem,
    cfg: &SolverConfig,
    plan: &ShiftPlan,
) -> Result<(LowRankSolution, ConvergenceRecord, LyapunovFactors)> {
    cfg.validate(p.m())?;
    let state = UnradiState::new(p)?;
    let out = drive(p, cfg, plan, state)?;
    let lyap = out.engine.lyapunov_factors();
    let sol = LowRankSolution::from_factors(out.engine.factors, out.shifts_used, out.converged, out.residual, cfg.emit_interp);
    Ok((sol, out.record, lyap))
}
