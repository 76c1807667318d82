use std::io::Write;

use faer::c64;

use super::cases::Case;
use crate::error::{Error, Result};

/// One row per step; row 0 is the initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct RecordRow {
    /// Shift slots consumed so far.
    pub iter: usize,
    pub case: Option<Case>,
    pub alpha: c64,
    pub beta: c64,
    pub residual: f64,
    pub elapsed_s: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceRecord {
    pub rows: Vec<RecordRow>,
}

pub const CSV_HEADER: [&str; 8] = ["iter", "case", "alpha_re", "alpha_im", "beta_re", "beta_im", "residual", "elapsed_s"];

impl ConvergenceRecord {
    pub fn residuals(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.residual).collect()
    }

    pub fn last_residual(&self) -> Option<f64> {
        self.rows.last().map(|r| r.residual)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let wrap = |e: csv::Error| Error::InvalidInput(format!("writing convergence log: {e}"));
        w.write_record(CSV_HEADER).map_err(wrap)?;
        for r in &self.rows {
            w.write_record([
                r.iter.to_string(),
                r.case.map_or("init", |c| c.label()).to_string(),
                format!("{:e}", r.alpha.re),
                format!("{:e}", r.alpha.im),
                format!("{:e}", r.beta.re),
                format!("{:e}", r.beta.im),
                format!("{:e}", r.residual),
                format!("{:e}", r.elapsed_s),
            ])
            .map_err(wrap)?;
        }
        w.flush().map_err(|e| Error::InvalidInput(format!("writing convergence log: {e}")))
    }
}
