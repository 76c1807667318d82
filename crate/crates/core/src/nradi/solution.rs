use faer::Mat;

use super::cases::{CaseShifts, ShiftSequence};
use super::state::{InterpolationData, NareFactors, ReducedModel};
use crate::error::{Error, Result};

/// Default cap on `n·n̂` for dense expansion of a solution.
pub const DENSIFY_CAP: usize = 10_000_000;

/// Factored solution `X̃ = V X̄ Ŵᵀ` with its gains and final residual factors.
#[derive(Clone, Debug)]
pub struct LowRankSolution {
    pub v: Mat<f64>,
    pub xbar: Mat<f64>,
    pub w: Mat<f64>,
    /// `K̃ = E X̃ B̂`
    pub k_gain: Mat<f64>,
    /// `K̄ = C X̃ Ê`
    pub kh_gain: Mat<f64>,
    pub b_perp: Mat<f64>,
    pub c_perp: Mat<f64>,
    /// `ŴᵀB̂`
    pub bh_r: Mat<f64>,
    /// `CV`
    pub c_r: Mat<f64>,
    pub shifts_used: ShiftSequence,
    pub cases: Vec<CaseShifts>,
    pub converged: bool,
    pub final_residual: f64,
    pub interp: Option<InterpolationData>,
}

impl LowRankSolution {
    pub(crate) fn from_factors(f: NareFactors, shifts_used: ShiftSequence, converged: bool, residual: f64, keep_interp: bool) -> Self {
        let xbar = f.xbar();
        Self {
            v: f.v,
            xbar,
            w: f.w,
            k_gain: f.k_gain,
            kh_gain: f.kh_gain,
            b_perp: f.b_perp,
            c_perp: f.c_perp,
            bh_r: f.bh_r,
            c_r: f.c_r,
            shifts_used,
            cases: f.cases,
            converged,
            final_residual: residual,
            interp: keep_interp.then_some(f.interp),
        }
    }

    /// Number of factor columns `r`.
    pub fn rank(&self) -> usize {
        self.v.ncols()
    }

    /// Shift slots consumed.
    pub fn slots(&self) -> usize {
        self.shifts_used.len()
    }

    pub fn reduced_model(&self) -> Option<ReducedModel> {
        self.interp.as_ref().map(|d| d.reduced(self.xbar.as_ref(), self.bh_r.as_ref(), self.c_r.as_ref()))
    }
}

/// Explicit `V X̄ Ŵᵀ`, refused above `cap` entries.
pub fn densify_solution(s: &LowRankSolution, cap: usize) -> Result<Mat<f64>> {
    let (n, nh) = (s.v.nrows(), s.w.nrows());
    if n.saturating_mul(nh) > cap {
        return Err(Error::CapExceeded(format!("{n}x{nh} solution exceeds {cap} entries")));
    }
    if s.rank() == 0 {
        return Ok(Mat::zeros(n, nh));
    }
    Ok(&s.v * &s.xbar * s.w.transpose())
}
