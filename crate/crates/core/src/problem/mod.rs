//! The NARE problem object `A X Ê + E X Â − E X B̂ C X Ê + B Ĉ = 0`.

mod embed;
mod heat;
mod io;

use faer::Mat;
use serde::{Deserialize, Serialize};

pub use embed::{embed_lyapunov, embed_sylvester};
pub use heat::{gen_heat, SplitMix64};

use crate::linalg::SparseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Nare,
    LyapunovEmbed,
    SylvesterEmbed,
    GeneratedHeat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemMetadata {
    pub kind: ProblemKind,
    pub seed: Option<u64>,
    #[serde(default)]
    pub note: String,
}

impl Default for ProblemMetadata {
    fn default() -> Self {
        Self { kind: ProblemKind::Nare, seed: None, note: String::new() }
    }
}

/// Coefficients of the NARE. `E, A` are n×n, `Ê, Â` are n̂×n̂, `B` n×m, `C` p×n, `B̂` n̂×p, `Ĉ` m×n̂.
#[derive(Clone, Debug)]
pub struct NareProblem {
    pub e: SparseMatrix,
    pub a: SparseMatrix,
    pub b: Mat<f64>,
    pub c: Mat<f64>,
    pub eh: SparseMatrix,
    pub ah: SparseMatrix,
    pub bh: Mat<f64>,
    pub ch: Mat<f64>,
    pub meta: ProblemMetadata,
}

/// Every violated dimension coupling, one line each.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}", violations.join("; "))]
pub struct DimensionReport {
    pub violations: Vec<String>,
}

impl NareProblem {
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn nh(&self) -> usize {
        self.ah.nrows()
    }

    /// Columns of `B` (rows of `Ĉ`).
    pub fn m(&self) -> usize {
        self.b.ncols()
    }

    /// Rows of `C` (columns of `B̂`).
    pub fn p(&self) -> usize {
        self.c.nrows()
    }

    pub fn validate(&self) -> Result<(), DimensionReport> {
        validate(self)
    }
}

pub fn validate(p: &NareProblem) -> Result<(), DimensionReport> {
    let mut v = Vec::new();
    let mut need = |ok: bool, msg: String| {
        if !ok {
            v.push(msg);
        }
    };
    let (n, nh) = (p.a.nrows(), p.ah.nrows());
    need(p.a.is_square(), format!("A not square ({}x{})", p.a.nrows(), p.a.ncols()));
    need(p.e.is_square(), format!("E not square ({}x{})", p.e.nrows(), p.e.ncols()));
    need(p.ah.is_square(), format!("Ah not square ({}x{})", p.ah.nrows(), p.ah.ncols()));
    need(p.eh.is_square(), format!("Eh not square ({}x{})", p.eh.nrows(), p.eh.ncols()));
    need(p.e.nrows() == n, format!("E rows ≠ A rows ({} vs {n})", p.e.nrows()));
    need(p.eh.nrows() == nh, format!("Eh rows ≠ Ah rows ({} vs {nh})", p.eh.nrows()));
    need(p.b.nrows() == n, format!("B rows ≠ A rows ({} vs {n})", p.b.nrows()));
    need(p.c.ncols() == n, format!("C cols ≠ A rows ({} vs {n})", p.c.ncols()));
    need(p.bh.nrows() == nh, format!("Bh rows ≠ Ah rows ({} vs {nh})", p.bh.nrows()));
    need(p.ch.ncols() == nh, format!("Ch cols ≠ Ah rows ({} vs {nh})", p.ch.ncols()));
    need(p.ch.nrows() == p.b.ncols(), format!("Ch rows ≠ B cols ({} vs {})", p.ch.nrows(), p.b.ncols()));
    need(p.bh.ncols() == p.c.nrows(), format!("Bh cols ≠ C rows ({} vs {})", p.bh.ncols(), p.c.nrows()));
    need(p.b.ncols() >= 1, "B has no columns".into());
    need(p.c.nrows() >= 1, "C has no rows".into());
    let dense = [("B", &p.b), ("C", &p.c), ("Bh", &p.bh), ("Ch", &p.ch)];
    for (name, m) in dense {
        need(crate::linalg::dense::all_finite(m.as_ref()), format!("{name} has non-finite entries"));
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(DimensionReport { violations: v })
    }
}
