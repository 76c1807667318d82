//! Dense transfer-function evaluation `C (sE − A)⁻¹ B`.

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::dense::{lift, solve_small};

pub fn transfer_eval(e: MatRef<'_, f64>, a: MatRef<'_, f64>, b: MatRef<'_, f64>, c: MatRef<'_, f64>, s: c64) -> Result<Mat<c64>> {
    let n = a.nrows();
    if a.ncols() != n || e.nrows() != n || e.ncols() != n || b.nrows() != n || c.ncols() != n {
        return Err(Error::Dimension(format!(
            "transfer function with A {}x{}, E {}x{}, B {}x{}, C {}x{}",
            a.nrows(),
            a.ncols(),
            e.nrows(),
            e.ncols(),
            b.nrows(),
            b.ncols(),
            c.nrows(),
            c.ncols()
        )));
    }
    let bc: Mat<c64> = lift(b);
    let x = resolvent_solve(e, a, bc.as_ref(), s)?;
    let cc: Mat<c64> = lift(c);
    Ok(&cc * &x)
}

/// `(sE − A)⁻¹ rhs`
pub fn resolvent_solve(e: MatRef<'_, f64>, a: MatRef<'_, f64>, rhs: MatRef<'_, c64>, s: c64) -> Result<Mat<c64>> {
    let n = a.nrows();
    let pencil = Mat::from_fn(n, n, |i, j| s * e[(i, j)] - c64::new(a[(i, j)], 0.0));
    solve_small(pencil.as_ref(), rhs, "resolvent sE - A")
}

/// `C (sI − A)⁻¹ B` for a reduced realization.
pub fn reduced_transfer_eval(a: MatRef<'_, f64>, b: MatRef<'_, f64>, c: MatRef<'_, f64>, s: c64) -> Result<Mat<c64>> {
    let id = Mat::<f64>::identity(a.nrows(), a.nrows());
    transfer_eval(id.as_ref(), a, b, c, s)
}
