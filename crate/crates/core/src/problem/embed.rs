use faer::{Mat, MatRef};

use super::{NareProblem, ProblemKind, ProblemMetadata};
use crate::linalg::SparseMatrix;

/// `A X Ê + E X Â + B Ĉ = 0` as a NARE with zero `C` (1×n) and zero `B̂` (n̂×1).
pub fn embed_sylvester(
    a: &SparseMatrix,
    e: &SparseMatrix,
    ah: &SparseMatrix,
    eh: &SparseMatrix,
    b: MatRef<'_, f64>,
    ch: MatRef<'_, f64>,
) -> NareProblem {
    NareProblem {
        e: e.clone(),
        a: a.clone(),
        b: b.to_owned(),
        c: Mat::zeros(1, a.nrows()),
        eh: eh.clone(),
        ah: ah.clone(),
        bh: Mat::zeros(ah.nrows(), 1),
        ch: ch.to_owned(),
        meta: ProblemMetadata { kind: ProblemKind::SylvesterEmbed, seed: None, note: String::new() },
    }
}

/// `A P Eᵀ + E P Aᵀ + B Bᵀ = 0` as a NARE with `Â = Aᵀ`, `Ê = Eᵀ`, `Ĉ = Bᵀ`.
pub fn embed_lyapunov(a: &SparseMatrix, e: &SparseMatrix, b: MatRef<'_, f64>) -> NareProblem {
    NareProblem {
        e: e.clone(),
        a: a.clone(),
        b: b.to_owned(),
        c: Mat::zeros(1, a.nrows()),
        eh: e.transpose(),
        ah: a.transpose(),
        bh: Mat::zeros(a.nrows(), 1),
        ch: b.transpose().to_owned(),
        meta: ProblemMetadata { kind: ProblemKind::LyapunovEmbed, seed: None, note: String::new() },
    }
}
