//! Accumulated factors shared by both iterations.

use faer::{Mat, MatRef};

use super::cases::CaseShifts;
use super::xblock::compute_x;
use crate::error::Result;
use crate::linalg::dense::{block_diag, hcat, upper_block, vcat};
use crate::linalg::spectral_norm_product;
use crate::problem::NareProblem;

/// `S_v, L_v, S_w, L_w` with `A V − E V S_v + B L_v = 0` and `ÂᵀŴ − ÊᵀŴ S_w + ĈᵀL_w = 0`.
#[derive(Clone, Debug)]
pub struct InterpolationData {
    pub s_v: Mat<f64>,
    pub l_v: Mat<f64>,
    pub s_w: Mat<f64>,
    pub l_w: Mat<f64>,
}

/// Reduced realizations `(A_r, B_r, C_r)` of `G` and `(Â_r, B̂_r, Ĉ_r)` of `Ĝ`.
#[derive(Clone, Debug)]
pub struct ReducedModel {
    pub a_r: Mat<f64>,
    pub b_r: Mat<f64>,
    pub c_r: Mat<f64>,
    pub ah_r: Mat<f64>,
    pub bh_r: Mat<f64>,
    pub ch_r: Mat<f64>,
}

impl InterpolationData {
    pub fn empty(m: usize) -> Self {
        Self { s_v: Mat::zeros(0, 0), l_v: Mat::zeros(m, 0), s_w: Mat::zeros(0, 0), l_w: Mat::zeros(m, 0) }
    }

    /// Append one step. `xbar`, `bh_r = ŴᵀB̂`, `c_r = CV` describe the factors before the step;
    /// `cv = C v_i` and `wt_bh = w_iᵀB̂` the new blocks.
    pub fn extend(
        &mut self,
        shifts: &CaseShifts,
        xbar: MatRef<'_, f64>,
        bh_r: MatRef<'_, f64>,
        c_r: MatRef<'_, f64>,
        cv: MatRef<'_, f64>,
        wt_bh: MatRef<'_, f64>,
    ) {
        let m = self.l_v.nrows();
        let sb = shifts.small_blocks(m);
        let top_v = xbar * (self.l_w.transpose() * &sb.l_v + bh_r * cv);
        let top_w = xbar.transpose() * (self.l_v.transpose() * &sb.l_w + c_r.transpose() * wt_bh.transpose());
        self.s_v = upper_block(self.s_v.as_ref(), top_v.as_ref(), sb.s_v.as_ref());
        self.s_w = upper_block(self.s_w.as_ref(), top_w.as_ref(), sb.s_w.as_ref());
        self.l_v = hcat(&[self.l_v.as_ref(), sb.l_v.as_ref()]);
        self.l_w = hcat(&[self.l_w.as_ref(), sb.l_w.as_ref()]);
    }

    /// Rebuild from stored factors and the step list.
    pub fn rebuild(p: &NareProblem, v: MatRef<'_, f64>, w: MatRef<'_, f64>, xbar: MatRef<'_, f64>, cases: &[CaseShifts]) -> Self {
        let m = p.m();
        let mut d = Self::empty(m);
        let cv_all = &p.c * v;
        let wbh_all = w.transpose() * &p.bh;
        let mut off = 0;
        for cs in cases {
            let q = cs.slots() * m;
            d.extend(
                cs,
                xbar.submatrix(0, 0, off, off),
                wbh_all.as_ref().submatrix(0, 0, off, wbh_all.ncols()),
                cv_all.as_ref().submatrix(0, 0, cv_all.nrows(), off),
                cv_all.as_ref().submatrix(0, off, cv_all.nrows(), q),
                wbh_all.as_ref().submatrix(off, 0, q, wbh_all.ncols()),
            );
            off += q;
        }
        d
    }

    /// `B_r = X̄L_wᵀ`, `Ĉ_r = L_vX̄`, `A_r = S_v − B_rL_v`, `Â_r = S_wᵀ − L_wᵀĈ_r`, `B̂_r = ŴᵀB̂`, `C_r = CV`.
    pub fn reduced(&self, xbar: MatRef<'_, f64>, bh_r: MatRef<'_, f64>, c_r: MatRef<'_, f64>) -> ReducedModel {
        let b_r = xbar * self.l_w.transpose();
        let ch_r = &self.l_v * xbar;
        let a_r = &self.s_v - &b_r * &self.l_v;
        let ah_r = self.s_w.transpose() - self.l_w.transpose() * &ch_r;
        ReducedModel { a_r, b_r, c_r: c_r.to_owned(), ah_r, bh_r: bh_r.to_owned(), ch_r }
    }
}

/// Factors `V, X̄, Ŵ`, gains `K̃, K̄` and residual factors `B⊥, Ĉ⊥` of the running iteration.
#[derive(Clone, Debug)]
pub struct NareFactors {
    pub v: Mat<f64>,
    pub w: Mat<f64>,
    pub x_blocks: Vec<Mat<f64>>,
    pub k_gain: Mat<f64>,
    pub kh_gain: Mat<f64>,
    pub b_perp: Mat<f64>,
    pub c_perp: Mat<f64>,
    /// `ŴᵀB̂`
    pub bh_r: Mat<f64>,
    /// `CV`
    pub c_r: Mat<f64>,
    pub cases: Vec<CaseShifts>,
    pub interp: InterpolationData,
}

impl NareFactors {
    pub fn new(p: &NareProblem) -> Self {
        let (n, nh, m, pp) = (p.n(), p.nh(), p.m(), p.p());
        Self {
            v: Mat::zeros(n, 0),
            w: Mat::zeros(nh, 0),
            x_blocks: Vec::new(),
            k_gain: Mat::zeros(n, pp),
            kh_gain: Mat::zeros(pp, nh),
            b_perp: p.b.clone(),
            c_perp: p.ch.clone(),
            bh_r: Mat::zeros(0, pp),
            c_r: Mat::zeros(pp, 0),
            cases: Vec::new(),
            interp: InterpolationData::empty(m),
        }
    }

    pub fn width(&self) -> usize {
        self.v.ncols()
    }

    pub fn xbar(&self) -> Mat<f64> {
        let refs: Vec<_> = self.x_blocks.iter().map(|b| b.as_ref()).collect();
        block_diag(&refs)
    }

    /// `‖B⊥Ĉ⊥‖₂`
    pub fn residual_norm(&self) -> Result<f64> {
        spectral_norm_product(self.b_perp.as_ref(), self.c_perp.as_ref())
    }

    /// Append the step's `v_i, w_i` blocks: compute `x_i` and update gains and residual factors.
    pub fn absorb(&mut self, p: &NareProblem, shifts: CaseShifts, v_i: Mat<f64>, w_i: Mat<f64>) -> Result<Mat<f64>> {
        let m = p.m();
        let wt_bh = w_i.transpose() * &p.bh;
        let cv = &p.c * &v_i;
        let x = compute_x(&shifts, wt_bh.as_ref(), cv.as_ref(), m)?;

        let ev = p.e.mul_dense(v_i.as_ref());
        let wte = p.eh.tr_mul_dense(w_i.as_ref()).transpose().to_owned();
        let evx = &ev * &x;
        let xwte = &x * &wte;
        self.k_gain += &evx * &wt_bh;
        self.kh_gain += &cv * &xwte;
        if shifts.slots() == 1 {
            self.b_perp += &evx;
            self.c_perp += &xwte;
        } else {
            self.b_perp += evx.as_ref().submatrix(0, 0, evx.nrows(), m);
            self.c_perp += xwte.as_ref().submatrix(0, 0, m, xwte.ncols());
        }

        let xbar = self.xbar();
        self.interp.extend(&shifts, xbar.as_ref(), self.bh_r.as_ref(), self.c_r.as_ref(), cv.as_ref(), wt_bh.as_ref());
        self.bh_r = vcat(&[self.bh_r.as_ref(), wt_bh.as_ref()]);
        self.c_r = hcat(&[self.c_r.as_ref(), cv.as_ref()]);
        self.v = hcat(&[self.v.as_ref(), v_i.as_ref()]);
        self.w = hcat(&[self.w.as_ref(), w_i.as_ref()]);
        self.x_blocks.push(x.clone());
        self.cases.push(shifts);
        Ok(x)
    }
}
