//! Dense invariant-subspace NARE solver and residuals.

use faer::{c64, Mat, MatRef};
use log::debug;

use crate::error::{Error, Result};
use crate::linalg::dense::{all_finite, fro, inverse_small, lift, norm2, re, solve_small};
use crate::linalg::{dense_eig, eigenvalues};
use crate::problem::NareProblem;

/// Largest `n + n̂` the dense solver accepts.
pub const DENSE_CAP: usize = 512;
/// Eigenvalues of the composite matrix with `|Re λ|` below this make the splitting ambiguous.
pub const BOUNDARY_TOL: f64 = 1e-10;
const NEWTON_STEPS: usize = 3;

/// `𝒦 = [[E⁻¹A, E⁻¹BĈÊ⁻¹], [B̂C, −ÂÊ⁻¹]]`
#[derive(Clone, Debug)]
pub struct CompositeSpectralMatrix {
    pub k: Mat<f64>,
    pub n: usize,
    pub nh: usize,
}

/// Dense pieces of a problem reused by the oracle routines.
pub(crate) struct DenseProblem {
    pub a: Mat<f64>,
    pub ah: Mat<f64>,
    pub e_inv: Mat<f64>,
    pub eh_inv: Mat<f64>,
}

impl DenseProblem {
    pub fn new(p: &NareProblem) -> Result<Self> {
        let e_inv = inverse_small(p.e.to_dense().as_ref(), "E")?;
        let eh_inv = inverse_small(p.eh.to_dense().as_ref(), "Ê")?;
        Ok(Self { a: p.a.to_dense(), ah: p.ah.to_dense(), e_inv, eh_inv })
    }
}

impl CompositeSpectralMatrix {
    pub fn new(p: &NareProblem) -> Result<Self> {
        check_size(p)?;
        p.validate()?;
        let d = DenseProblem::new(p)?;
        Ok(Self::from_dense(p, &d))
    }

    pub(crate) fn from_dense(p: &NareProblem, d: &DenseProblem) -> Self {
        let (n, nh) = (p.n(), p.nh());
        let tl = &d.e_inv * &d.a;
        let tr = &d.e_inv * &p.b * &p.ch * &d.eh_inv;
        let bl = &p.bh * &p.c;
        let br = -(&d.ah * &d.eh_inv);
        let mut k = Mat::zeros(n + nh, n + nh);
        k.as_mut().submatrix_mut(0, 0, n, n).copy_from(&tl);
        k.as_mut().submatrix_mut(0, n, n, nh).copy_from(&tr);
        k.as_mut().submatrix_mut(n, 0, nh, n).copy_from(&bl);
        k.as_mut().submatrix_mut(n, n, nh, nh).copy_from(&br);
        Self { k, n, nh }
    }

    pub fn eigenvalues(&self) -> Result<Vec<c64>> {
        eigenvalues(self.k.as_ref())
    }
}

/// The stabilizing solution with its closed-loop spectra.
#[derive(Clone, Debug)]
pub struct DenseNareSolution {
    pub x: Mat<f64>,
    /// `λ(E⁻¹A − XB̂C)`
    pub closed_loop: Vec<c64>,
    /// `λ(ÂÊ⁻¹ − B̂CX)`
    pub dual_closed_loop: Vec<c64>,
    /// `‖AXÊ + EXÂ − EXB̂CXÊ + BĈ‖₂`
    pub residual_norm: f64,
    pub newton_steps: usize,
}

fn check_size(p: &NareProblem) -> Result<()> {
    if p.n() + p.nh() > DENSE_CAP {
        return Err(Error::CapExceeded(format!("n + n̂ = {} exceeds the dense cap {DENSE_CAP}", p.n() + p.nh())));
    }
    Ok(())
}

/// `AXÊ + EXÂ − EXB̂CXÊ + BĈ` and its spectral norm.
pub fn dense_residual(p: &NareProblem, x: MatRef<'_, f64>) -> Result<(Mat<f64>, f64)> {
    if x.nrows() != p.n() || x.ncols() != p.nh() {
        return Err(Error::Dimension(format!("X is {}x{}, expected {}x{}", x.nrows(), x.ncols(), p.n(), p.nh())));
    }
    let xeh = p.eh.left_mul_dense(x);
    let axeh = p.a.mul_dense(xeh.as_ref());
    let exah = p.e.mul_dense(p.ah.left_mul_dense(x).as_ref());
    let quad = p.e.mul_dense((x * &p.bh * &p.c * &xeh).as_ref());
    let r = axeh + exah - quad + &p.b * &p.ch;
    let nrm = norm2(r.as_ref());
    Ok((r, nrm))
}

/// `(E⁻¹A − XB̂C, ÂÊ⁻¹ − B̂CX)`
pub fn closed_loop_matrices(p: &NareProblem, x: MatRef<'_, f64>) -> Result<(Mat<f64>, Mat<f64>)> {
    let d = DenseProblem::new(p)?;
    Ok(closed_loops(p, &d, x))
}

fn closed_loops(p: &NareProblem, d: &DenseProblem, x: MatRef<'_, f64>) -> (Mat<f64>, Mat<f64>) {
    let bhc = &p.bh * &p.c;
    (&d.e_inv * &d.a - x * &bhc, &d.ah * &d.eh_inv - &bhc * x)
}

/// Stabilizing solution from the invariant subspace of `𝒦` for eigenvalues with positive real part,
/// polished by at most three Newton steps.
pub fn dense_nare_solve(p: &NareProblem) -> Result<DenseNareSolution> {
    check_size(p)?;
    p.validate()?;
    let d = DenseProblem::new(p)?;
    let comp = CompositeSpectralMatrix::from_dense(p, &d);
    let (n, nh) = (comp.n, comp.nh);
    let eig = dense_eig(comp.k.as_ref())?;
    if let Some(z) = eig.values.iter().find(|z| z.re.abs() < BOUNDARY_TOL) {
        return Err(Error::NoStabilizingSolution(format!("composite eigenvalue {z} lies on the imaginary axis")));
    }
    let unstable: Vec<usize> = (0..n + nh).filter(|&l| eig.values[l].re > 0.0).collect();
    if unstable.len() != nh {
        return Err(Error::NoStabilizingSolution(format!(
            "{} eigenvalues with positive real part, expected n̂ = {nh}",
            unstable.len()
        )));
    }
    let u1 = Mat::from_fn(n, nh, |i, j| eig.vectors[(i, unstable[j])]);
    let u2 = Mat::from_fn(nh, nh, |i, j| eig.vectors[(n + i, unstable[j])]);
    // X = U₁U₂⁻¹, i.e. U₂ᵀXᵀ = U₁ᵀ
    let xt = solve_small(u2.transpose(), u1.transpose(), "invariant subspace U₂")
        .map_err(|e| Error::NoStabilizingSolution(format!("invariant subspace is not a graph: {e}")))?;
    let mut x = re(xt.transpose());

    let scale = fro((&p.b * &p.ch).as_ref()).max(f64::MIN_POSITIVE);
    let (_, mut res) = dense_residual(p, x.as_ref())?;
    let mut steps = 0;
    while steps < NEWTON_STEPS && res > 1e-13 * scale {
        let Some(next) = newton_step(p, &d, x.as_ref()) else { break };
        let (_, r_next) = dense_residual(p, next.as_ref())?;
        if !(r_next < res) {
            break;
        }
        debug!("oracle Newton step {}: residual {res:e} -> {r_next:e}", steps + 1);
        x = next;
        res = r_next;
        steps += 1;
    }

    let (a_cl, ah_cl) = closed_loops(p, &d, x.as_ref());
    let closed_loop = eigenvalues(a_cl.as_ref())?;
    let dual_closed_loop = eigenvalues(ah_cl.as_ref())?;
    if let Some(z) = closed_loop.iter().chain(&dual_closed_loop).find(|z| z.re >= 0.0) {
        return Err(Error::NoStabilizingSolution(format!("closed-loop eigenvalue {z} is not in the open left half-plane")));
    }
    Ok(DenseNareSolution { x, closed_loop, dual_closed_loop, residual_norm: res, newton_steps: steps })
}

/// Solve `A_cl Δ + Δ Â_cl = −E⁻¹RÊ⁻¹` by diagonalizing both closed loops.
fn newton_step(p: &NareProblem, d: &DenseProblem, x: MatRef<'_, f64>) -> Option<Mat<f64>> {
    let (r, _) = dense_residual(p, x).ok()?;
    let rhs = -(&d.e_inv * &r * &d.eh_inv);
    let (a_cl, ah_cl) = closed_loops(p, d, x);
    let left = dense_eig(a_cl.as_ref()).ok()?;
    let right = dense_eig(ah_cl.as_ref()).ok()?;
    let rc: Mat<c64> = lift(rhs.as_ref());
    let mut t = &left.inverse * &rc * &right.vectors;
    for i in 0..t.nrows() {
        for j in 0..t.ncols() {
            let den = left.values[i] + right.values[j];
            if den.norm() == 0.0 {
                return None;
            }
            t[(i, j)] /= den;
        }
    }
    let delta = re((&left.vectors * &t * &right.inverse).as_ref());
    all_finite(delta.as_ref()).then(|| x.to_owned() + delta)
}
