//! Vectorized dense Sylvester solves.

use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::dense::{eye, solve_small};

/// Largest unknown count `k·j` accepted by the vectorized solvers.
pub const KRON_CAP: usize = 4096;

/// `S₁ᵀY + YS₂ = M` for `Y` (k×j).
pub fn kron_sylvester_solve(s1: MatRef<'_, f64>, s2: MatRef<'_, f64>, m: MatRef<'_, f64>) -> Result<Mat<f64>> {
    let (k, j) = (s1.nrows(), s2.nrows());
    let ik = eye(k);
    let ij = eye(j);
    kron_generalized_sylvester(s1.transpose(), ik.as_ref(), s2, ij.as_ref(), m)
}

/// `A X Ê + E X Â = M` for `X` (n×n̂), through `(Êᵀ ⊗ A + Âᵀ ⊗ E) vec X = vec M`.
pub fn kron_generalized_sylvester(
    a: MatRef<'_, f64>,
    e: MatRef<'_, f64>,
    ah: MatRef<'_, f64>,
    eh: MatRef<'_, f64>,
    m: MatRef<'_, f64>,
) -> Result<Mat<f64>> {
    let (n, nh) = (a.nrows(), ah.nrows());
    let square = a.ncols() == n && e.nrows() == n && e.ncols() == n && ah.ncols() == nh && eh.nrows() == nh && eh.ncols() == nh;
    if !square || m.nrows() != n || m.ncols() != nh {
        return Err(Error::Dimension(format!(
            "Sylvester operands {}x{}, {}x{} with right-hand side {}x{}",
            a.nrows(),
            a.ncols(),
            ah.nrows(),
            ah.ncols(),
            m.nrows(),
            m.ncols()
        )));
    }
    let size = n * nh;
    if size > KRON_CAP {
        return Err(Error::CapExceeded(format!("{size} unknowns exceed the vectorized cap of {KRON_CAP}")));
    }
    let op = Mat::from_fn(size, size, |r, c| {
        let (i, jj) = (r % n, r / n);
        let (kk, l) = (c % n, c / n);
        eh[(l, jj)] * a[(i, kk)] + ah[(l, jj)] * e[(i, kk)]
    });
    let rhs = Mat::from_fn(size, 1, |r, _| m[(r % n, r / n)]);
    let y = solve_small(op.as_ref(), rhs.as_ref(), "vectorized Sylvester operator")
        .map_err(|e| Error::SpectraCollision(format!("{e}")))?;
    Ok(Mat::from_fn(n, nh, |i, jj| y[(i + n * jj, 0)]))
}
