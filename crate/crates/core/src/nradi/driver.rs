//! The outer loop shared by both iterations: shift supply, stop test, bookkeeping.

use std::time::Instant;

use faer::{c64, Mat};
use log::{debug, info};

use super::cases::{classify_case, CaseShifts, ShiftOrigin, ShiftSequence};
use super::config::SolverConfig;
use super::record::{ConvergenceRecord, RecordRow};
use super::state::NareFactors;
use crate::error::Result;
use crate::problem::NareProblem;
use crate::shifts::ShiftGenerator;

/// Where shifts come from.
#[derive(Clone, Debug)]
pub enum ShiftPlan {
    /// A fixed list; the iteration stops unconverged when it runs out.
    User(ShiftSequence),
    /// Start from the configured initial shift and generate the rest.
    Auto,
}

pub(crate) trait Engine {
    fn step(&mut self, shifts: &CaseShifts) -> Result<()>;
    fn factors(&self) -> &NareFactors;
}

pub(crate) struct Outcome<E> {
    pub engine: E,
    pub shifts_used: ShiftSequence,
    pub converged: bool,
    pub residual: f64,
    pub record: ConvergenceRecord,
}

pub(crate) fn initial_sequence(cfg: &SolverConfig) -> ShiftSequence {
    let z = cfg.initial_shift;
    if super::cases::is_real(z) {
        ShiftSequence::symmetric(&[c64::new(z.re, 0.0)], ShiftOrigin::Auto)
    } else {
        ShiftSequence::symmetric(&[z, z.conj()], ShiftOrigin::Auto)
    }
}

pub(crate) fn drive<E: Engine>(p: &NareProblem, cfg: &SolverConfig, plan: &ShiftPlan, mut engine: E) -> Result<Outcome<E>> {
    let start = Instant::now();
    let (mut seq, mut generator) = match plan {
        ShiftPlan::User(s) => {
            s.check_stable()?;
            (s.clone(), None)
        }
        ShiftPlan::Auto => {
            let s = initial_sequence(cfg);
            s.check_stable()?;
            let g = ShiftGenerator::new(p, cfg.rank_max, &s.alpha);
            (s, Some(g))
        }
    };

    let denom = crate::linalg::spectral_norm_product(p.b.as_ref(), p.ch.as_ref())?;
    let mut record = ConvergenceRecord::default();
    let zero = c64::new(0.0, 0.0);
    let initial = if denom == 0.0 { 0.0 } else { 1.0 };
    record.rows.push(RecordRow { iter: 0, case: None, alpha: zero, beta: zero, residual: initial, elapsed_s: 0.0 });
    if denom == 0.0 {
        info!("‖BĈ‖ = 0; returning the zero solution");
        return Ok(Outcome { engine, shifts_used: ShiftSequence::new(), converged: true, residual: 0.0, record });
    }

    let mut k = 0usize;
    let mut res = initial;
    let converged = loop {
        if res < cfg.tol {
            break true;
        }
        if k >= seq.len() {
            info!("shift list exhausted after {k} slots");
            break false;
        }
        let cs = classify_case(&seq, k)?;
        if k + cs.slots() > cfg.kmax {
            info!("maximum of {} shift slots reached", cfg.kmax);
            break false;
        }
        engine.step(&cs)?;
        k += cs.slots();
        let f = engine.factors();
        res = f.residual_norm()? / denom;
        debug!("slot {k}: case {} alpha {} beta {} residual {res:e}", cs.case(), seq.alpha[k - cs.slots()], seq.beta[k - cs.slots()]);
        record.rows.push(RecordRow {
            iter: k,
            case: Some(cs.case()),
            alpha: seq.alpha[k - cs.slots()],
            beta: seq.beta[k - cs.slots()],
            residual: res,
            elapsed_s: start.elapsed().as_secs_f64(),
        });

        if let Some(g) = generator.as_mut() {
            let q = cs.slots() * p.m();
            let r = f.width();
            let vb: Mat<f64> = f.v.as_ref().submatrix(0, r - q, f.v.nrows(), q).to_owned();
            let wb: Mat<f64> = f.w.as_ref().submatrix(0, r - q, f.w.nrows(), q).to_owned();
            g.observe(vb.as_ref(), wb.as_ref());
            if res >= cfg.tol && k >= seq.len() && k < cfg.kmax {
                let new = g.next_shifts(p, f.b_perp.as_ref(), f.c_perp.as_ref())?;
                debug!("generated shifts {new:?}");
                for z in new {
                    seq.push(z, z, ShiftOrigin::Auto);
                }
            }
        }
    };

    info!("{} after {k} slots, relative residual {res:e}", if converged { "converged" } else { "stopped" });
    Ok(Outcome { engine, shifts_used: seq.truncated(k), converged, residual: res, record })
}
