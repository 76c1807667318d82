#![allow(dead_code)]

use nare_adi::linalg::dense::norm2;
use nare_adi::nradi::{ShiftOrigin, ShiftSequence};
use nare_adi::problem::ProblemMetadata;
use nare_adi::{c64, Mat, NareProblem, SparseMatrix};

pub fn mat(rows: &[&[f64]]) -> Mat<f64> {
    Mat::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
}

pub fn sparse(rows: &[&[f64]]) -> SparseMatrix {
    SparseMatrix::from_dense(mat(rows).as_ref()).unwrap()
}

/// Scalar NARE `a x ê + e x â − e x b̂ c x ê + b ĉ = 0` with `e = ê = 1`.
pub fn scalar_problem(a: f64, ah: f64, b: f64, bh: f64, c: f64, ch: f64) -> NareProblem {
    NareProblem {
        e: sparse(&[&[1.0]]),
        a: sparse(&[&[a]]),
        b: mat(&[&[b]]),
        c: mat(&[&[c]]),
        eh: sparse(&[&[1.0]]),
        ah: sparse(&[&[ah]]),
        bh: mat(&[&[bh]]),
        ch: mat(&[&[ch]]),
        meta: ProblemMetadata::default(),
    }
}

/// The running scalar example: `a = â = −1`, `b = b̂ = c = 1`, `ĉ = 3`, stabilizing root 1.
pub fn unit_scalar() -> NareProblem {
    scalar_problem(-1.0, -1.0, 1.0, 1.0, 1.0, 3.0)
}

pub fn shifts(rows: &[(f64, f64, f64, f64)]) -> ShiftSequence {
    let mut s = ShiftSequence::new();
    for &(ar, ai, br, bi) in rows {
        s.push(c64::new(ar, ai), c64::new(br, bi), ShiftOrigin::User);
    }
    s
}

/// `‖a − b‖₂ / ‖b‖₂`
pub fn rel(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    norm2((a - b).as_ref()) / norm2(b.as_ref())
}

/// A shift list exercising every case: III, IV, II, then two real slots.
pub fn mixed_cases() -> ShiftSequence {
    shifts(&[
        (-1.0, 1.0, -3.0, 0.0),
        (-1.0, -1.0, -4.0, 0.0),
        (-3.0, 0.0, -1.0, 2.0),
        (-6.0, 0.0, -1.0, -2.0),
        (-2.0, 0.5, -0.8, 1.5),
        (-2.0, -0.5, -0.8, -1.5),
        (-0.5, 0.0, -0.7, 0.0),
        (-20.0, 0.0, -30.0, 0.0),
    ])
}
