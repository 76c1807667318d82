use faer::c64;
use serde::{Deserialize, Serialize};

use super::cases::VALID_TOL;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nradi,
    Unradi,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nradi" => Ok(Algorithm::Nradi),
            "unradi" => Ok(Algorithm::Unradi),
            other => Err(Error::InvalidInput(format!("unknown algorithm {other:?} (expected nradi or unradi)"))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Nradi => "nradi",
            Algorithm::Unradi => "unradi",
        })
    }
}

/// Solver settings. Defaults: τ = 1e-10, 100 shift slots, projection width 14, first shift −0.001.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Stop once `‖B⊥Ĉ⊥‖₂ / ‖BĈ‖₂ < tol`.
    pub tol: f64,
    /// Maximum number of shift slots consumed.
    pub kmax: usize,
    /// Projection-basis width that triggers a restart of the shift generator.
    pub rank_max: usize,
    /// First shift in automatic mode, used for both α₁ and β₁. A complex value starts a conjugate pair.
    pub initial_shift: c64,
    /// Keep the interpolation data `S_v, L_v, S_w, L_w` in the result.
    pub emit_interp: bool,
    pub algorithm: Algorithm,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            kmax: 100,
            rank_max: 14,
            initial_shift: c64::new(-0.001, 0.0),
            emit_interp: false,
            algorithm: Algorithm::Nradi,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self, m: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.tol) {
            return Err(Error::InvalidInput(format!("tolerance {} outside [0, 1]", self.tol)));
        }
        if self.kmax < 1 {
            return Err(Error::InvalidInput("max iterations must be at least 1".into()));
        }
        if self.rank_max < m {
            return Err(Error::InvalidInput(format!("rank_max {} is below the block width m = {m}", self.rank_max)));
        }
        if !(self.initial_shift.re < -VALID_TOL) {
            return Err(Error::ShiftRejected(format!(
                "initial shift {} must have real part below -{VALID_TOL:e}",
                self.initial_shift
            )));
        }
        Ok(())
    }
}
