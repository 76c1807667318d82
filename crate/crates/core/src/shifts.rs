//! Automatic shifts from dominant poles of projected pencils, alternating between the V and W sides.

use faer::{c64, Mat, MatRef};
use log::warn;

use crate::error::{Error, Result};
use crate::linalg::dense::{hcat, solve_small};
use crate::linalg::{dense_eig, thin_orth};
use crate::problem::NareProblem;

/// Poles with `|Re λ|` below this are pushed to `Re = −PERTURBED_RE`.
pub const NEAR_AXIS: f64 = 1e-8;
pub const PERTURBED_RE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    V,
    W,
}

/// Windowed raw history of one side's blocks and its current orthonormal basis.
#[derive(Clone, Debug)]
pub struct ProjectionBasis {
    pub side: Side,
    raw: Mat<f64>,
    r_idx: usize,
    last_width: usize,
    rank_max: usize,
    basis: Mat<f64>,
}

impl ProjectionBasis {
    pub fn new(side: Side, rows: usize, rank_max: usize) -> Self {
        Self { side, raw: Mat::zeros(rows, 0), r_idx: 1, last_width: 0, rank_max, basis: Mat::zeros(rows, 0) }
    }

    /// Record a block without refreshing the basis.
    pub fn push(&mut self, block: MatRef<'_, f64>, m: usize) {
        let joined = hcat(&[self.raw.as_ref(), block]);
        let keep = (self.rank_max + 2 * m).min(joined.ncols());
        self.raw = joined.as_ref().submatrix(0, joined.ncols() - keep, joined.nrows(), keep).to_owned();
    }

    /// Re-window and orthonormalize: the window is the last `r_idx·m` raw columns;
    /// once the previous window reached `rank_max`, history restarts at one block.
    pub fn refresh(&mut self, m: usize) -> MatRef<'_, f64> {
        if self.last_width >= self.rank_max {
            self.r_idx = 1;
        }
        let width = (self.r_idx * m).min(self.raw.ncols());
        let window = self.raw.as_ref().submatrix(0, self.raw.ncols() - width, self.raw.nrows(), width);
        self.last_width = width;
        self.basis = thin_orth(window);
        self.r_idx += 1;
        self.basis.as_ref()
    }

    pub fn update_basis(&mut self, new_block: MatRef<'_, f64>, m: usize) -> MatRef<'_, f64> {
        self.push(new_block, m);
        self.refresh(m)
    }

    pub fn basis(&self) -> MatRef<'_, f64> {
        self.basis.as_ref()
    }

    pub fn r_idx(&self) -> usize {
        self.r_idx
    }

    /// Width of the last raw window.
    pub fn window_width(&self) -> usize {
        self.last_width
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DominantPoleScore {
    pub lambda: c64,
    /// `‖r‖² / |Re λ|`
    pub score: f64,
    pub residue_norm: f64,
    pub index: usize,
}

/// Most controllable (V side) or observable (W side) pole of the projected pencil.
///
/// V side: eigenvalues of `E_proj⁻¹A_proj`, residues `T⁻¹(l,:)·R`. W side: eigenvalues of
/// `A_proj E_proj⁻¹`, residues `R·T(:,l)`. Eigenvectors are scaled to unit norm.
pub fn dominant_pole(
    e_proj: MatRef<'_, f64>,
    a_proj: MatRef<'_, f64>,
    r_proj: MatRef<'_, f64>,
    side: Side,
) -> Result<DominantPoleScore> {
    let k = e_proj.nrows();
    if k == 0 {
        return Err(Error::Numerical("empty projection basis".into()));
    }
    let m = match side {
        Side::V => solve_small(e_proj, a_proj, "projected mass matrix")?,
        Side::W => solve_small(e_proj.transpose(), a_proj.transpose(), "projected mass matrix")?
            .transpose()
            .to_owned(),
    };
    let eig = dense_eig(m.as_ref())?;
    let mut best: Option<DominantPoleScore> = None;
    for (l, &lambda) in eig.values.iter().enumerate() {
        let re = lambda.re.abs();
        if re == 0.0 {
            continue;
        }
        let r2: f64 = match side {
            Side::V => (0..r_proj.ncols())
                .map(|j| (0..k).map(|i| eig.inverse[(l, i)] * r_proj[(i, j)]).sum::<c64>().norm_sqr())
                .sum(),
            Side::W => (0..r_proj.nrows())
                .map(|i| (0..k).map(|j| eig.vectors[(j, l)] * r_proj[(i, j)]).sum::<c64>().norm_sqr())
                .sum(),
        };
        let cand = DominantPoleScore { lambda, score: r2 / re, residue_norm: r2.sqrt(), index: l };
        best = Some(match best {
            None => cand,
            Some(b) if beats(&cand, &b) => cand,
            Some(b) => b,
        });
    }
    best.ok_or_else(|| Error::Numerical("every projected pole lies on the imaginary axis".into()))
}

/// Relative tolerance under which two scores (or moduli) count as tied.
pub const SCORE_TIE_RTOL: f64 = 1e-12;

/// Larger score, then larger `|λ|`, then the upper half-plane member of a conjugate pair;
/// remaining ties keep the lower index.
fn beats(a: &DominantPoleScore, b: &DominantPoleScore) -> bool {
    let tied = |x: f64, y: f64| (x - y).abs() <= SCORE_TIE_RTOL * x.abs().max(y.abs());
    if !tied(a.score, b.score) {
        return a.score > b.score;
    }
    let (na, nb) = (a.lambda.norm(), b.lambda.norm());
    if !tied(na, nb) {
        return na > nb;
    }
    a.lambda.im > 0.0 && b.lambda.im < 0.0
}

/// Reflect into the left half-plane and pair: one real shift, or a conjugate pair.
pub fn next_shift_pair(score: &DominantPoleScore) -> Vec<c64> {
    let lam = score.lambda;
    let mut re = -lam.re.abs();
    if lam.re.abs() < NEAR_AXIS {
        re = -PERTURBED_RE;
    }
    if lam.im.abs() <= crate::nradi::cases::REAL_TOL {
        vec![c64::new(re, 0.0)]
    } else {
        let z = c64::new(re, lam.im);
        vec![z, z.conj()]
    }
}

/// Produces the next shifts, alternating V side, W side, V side, …
#[derive(Clone, Debug)]
pub struct ShiftGenerator {
    v: ProjectionBasis,
    w: ProjectionBasis,
    next: Side,
    m: usize,
    last: Vec<c64>,
}

impl ShiftGenerator {
    pub fn new(p: &NareProblem, rank_max: usize, initial: &[c64]) -> Self {
        Self {
            v: ProjectionBasis::new(Side::V, p.n(), rank_max),
            w: ProjectionBasis::new(Side::W, p.nh(), rank_max),
            next: Side::V,
            m: p.m(),
            last: initial.to_vec(),
        }
    }

    /// Record the step's `v_i, w_i` blocks.
    pub fn observe(&mut self, v_block: MatRef<'_, f64>, w_block: MatRef<'_, f64>) {
        self.v.push(v_block, self.m);
        self.w.push(w_block, self.m);
    }

    pub fn next_side(&self) -> Side {
        self.next
    }

    /// Shifts to append to both lists; falls back to the previous shift when the projected problem is degenerate.
    pub fn next_shifts(&mut self, p: &NareProblem, b_perp: MatRef<'_, f64>, c_perp: MatRef<'_, f64>) -> Result<Vec<c64>> {
        let side = self.next;
        self.next = match side {
            Side::V => Side::W,
            Side::W => Side::V,
        };
        let scored = match side {
            Side::V => {
                let q = self.v.refresh(self.m).to_owned();
                let e_proj = q.transpose() * p.e.mul_dense(q.as_ref());
                let a_proj = q.transpose() * p.a.mul_dense(q.as_ref());
                let b_proj = q.transpose() * b_perp;
                dominant_pole(e_proj.as_ref(), a_proj.as_ref(), b_proj.as_ref(), side)
            }
            Side::W => {
                let q = self.w.refresh(self.m).to_owned();
                let e_proj = q.transpose() * p.eh.mul_dense(q.as_ref());
                let a_proj = q.transpose() * p.ah.mul_dense(q.as_ref());
                let c_proj = c_perp * &q;
                dominant_pole(e_proj.as_ref(), a_proj.as_ref(), c_proj.as_ref(), side)
            }
        };
        match scored {
            Ok(s) => {
                self.last = next_shift_pair(&s);
                Ok(self.last.clone())
            }
            Err(e @ (Error::Defective(_) | Error::Singular(_) | Error::Numerical(_))) => {
                warn!("shift generation on side {side:?} failed ({e}); reusing previous shift");
                Ok(self.last.clone())
            }
            Err(e) => Err(e),
        }
    }
}
