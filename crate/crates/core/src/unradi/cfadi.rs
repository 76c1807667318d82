//! Cholesky-factor ADI expansion of one side: `V_lyap` for `(A, E, B)` or `Ŵ_lyap` for `(Âᵀ, Êᵀ, Ĉᵀ)`.

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::dense::{eye, hcat, kron, scale, upper_block, DenseBlock};
use crate::linalg::{shifted_factorize, solve_factored, SparseMatrix};
use crate::nradi::cases::{is_real, VALID_TOL};

/// `γ = √(−2 Re σ)`, `δ = Re σ / Im σ` and the off-diagonal factor `√(1+δ²)/(2δ)` of a complex block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CfadiCaseScalars {
    pub gamma: f64,
    pub delta: Option<f64>,
    pub block_factor: Option<f64>,
}

impl CfadiCaseScalars {
    pub fn new(sigma: c64) -> Result<Self> {
        if !(sigma.re < -VALID_TOL) {
            return Err(Error::ShiftRejected(format!("shift {sigma} does not have a negative real part")));
        }
        let gamma = (-2.0 * sigma.re).sqrt();
        if is_real(sigma) {
            return Ok(Self { gamma, delta: None, block_factor: None });
        }
        let delta = sigma.re / sigma.im;
        Ok(Self { gamma, delta: Some(delta), block_factor: Some((1.0 + delta * delta).sqrt() / (2.0 * delta)) })
    }
}

/// Growing CF-ADI factor of one side together with its Sylvester data and script residual.
///
/// Forward form: `A Z − E Z S + B L = 0`; script form: `A Z + E Z (LᵀL − S) + ℬ⊥ L = 0`
/// with `ℬ⊥ = B − E Z Lᵀ`.
#[derive(Clone, Debug)]
pub struct CfadiSide {
    /// `Z` (`V_lyap` or `Ŵ_lyap`).
    pub basis: Mat<f64>,
    pub s: Mat<f64>,
    pub l: Mat<f64>,
    /// `ℬ⊥` (V side) or `𝒞̂⊥ᵀ` (W side), stored column-wise.
    pub script: Mat<f64>,
    /// `C V_lyap` (V side) or `B̂ᵀŴ_lyap` (W side).
    pub coupled: Mat<f64>,
}

impl CfadiSide {
    pub fn new(rhs: MatRef<'_, f64>, coupling_rows: usize) -> Self {
        let (n, m) = (rhs.nrows(), rhs.ncols());
        Self {
            basis: Mat::zeros(n, 0),
            s: Mat::zeros(0, 0),
            l: Mat::zeros(m, 0),
            script: rhs.to_owned(),
            coupled: Mat::zeros(coupling_rows, 0),
        }
    }

    pub fn width(&self) -> usize {
        self.basis.ncols()
    }

    /// One expansion with shift `sigma`: solve `(A + σE) y = ℬ⊥`, append the real or complex-pair block,
    /// extend `S, L` and update the script residual. Returns the scalars used.
    pub fn expand(&mut self, a: &SparseMatrix, e: &SparseMatrix, coupling: MatRef<'_, f64>, sigma: c64) -> Result<CfadiCaseScalars> {
        let sc = CfadiCaseScalars::new(sigma)?;
        let m = self.script.ncols();
        let g = sc.gamma;
        let f = shifted_factorize(a, e, sigma)?;
        let y = solve_factored(&f, &DenseBlock::Real(self.script.clone()))?;
        let (block, s_new, l_new, update) = match (sc.delta, sc.block_factor) {
            (Some(delta), Some(bt)) => {
                let yr = y.real_part();
                let yi = y.imag_part();
                let lead = &yr + scale(yi.as_ref(), delta);
                let first = scale(lead.as_ref(), 2f64.sqrt() * g);
                let second = scale(yi.as_ref(), 2f64.sqrt() * g * (delta * delta + 1.0).sqrt());
                let core = Mat::from_fn(2, 2, |i, j| g * g * [[1.0, bt], [-bt, 0.0]][i][j]);
                let lead_row = Mat::from_fn(1, 2, |_, j| if j == 0 { -(2f64.sqrt()) * g } else { 0.0 });
                (
                    hcat(&[first.as_ref(), second.as_ref()]),
                    kron(core.as_ref(), eye(m).as_ref()),
                    kron(lead_row.as_ref(), eye(m).as_ref()),
                    scale(e.mul_dense(lead.as_ref()).as_ref(), 2.0 * g * g),
                )
            }
            _ => {
                let y = y.real_part();
                (
                    scale(y.as_ref(), g),
                    scale(eye(m).as_ref(), -sigma.re),
                    scale(eye(m).as_ref(), -g),
                    scale(e.mul_dense(y.as_ref()).as_ref(), g * g),
                )
            }
        };
        let top = self.l.transpose() * &l_new;
        self.s = upper_block(self.s.as_ref(), top.as_ref(), s_new.as_ref());
        self.l = hcat(&[self.l.as_ref(), l_new.as_ref()]);
        self.script += &update;
        self.coupled = hcat(&[self.coupled.as_ref(), (coupling * &block).as_ref()]);
        self.basis = hcat(&[self.basis.as_ref(), block.as_ref()]);
        Ok(sc)
    }
}
