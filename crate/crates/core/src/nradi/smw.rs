//! Solves with the feedback-shifted pencil `A − K C + αE` through the base factorization of `A + αE`.

use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::dense::{lift, solve_small, DenseBlock, Scalar};
use crate::linalg::{solve_factored, ShiftedFactorization};

/// `(A − K C + αE)⁻¹ RHS` as `X_s + Y (I − C Y)⁻¹ (C X_s)` with `[X_s, Y] = (A + αE)⁻¹ [RHS, K]`.
pub fn smw_solve(
    base: &ShiftedFactorization,
    k: MatRef<'_, f64>,
    c: MatRef<'_, f64>,
    rhs: &DenseBlock,
) -> Result<DenseBlock> {
    let n = base.dim();
    if k.nrows() != n || c.ncols() != n || k.ncols() != c.nrows() || rhs.nrows() != n {
        return Err(Error::Dimension(format!(
            "SMW solve: base {n}, K {}x{}, C {}x{}, RHS {} rows",
            k.nrows(),
            k.ncols(),
            c.nrows(),
            c.ncols(),
            rhs.nrows()
        )));
    }
    let xs = solve_factored(base, rhs)?;
    let y = base.solve_real(k)?;
    match (xs, y) {
        (DenseBlock::Real(xs), DenseBlock::Real(y)) => correct(c, xs, y).map(DenseBlock::Real),
        (xs, y) => correct(c, xs.to_complex(), y.to_complex()).map(DenseBlock::Complex),
    }
}

fn correct<T: Scalar>(c: MatRef<'_, f64>, xs: Mat<T>, y: Mat<T>) -> Result<Mat<T>> {
    let p = c.nrows();
    let cc: Mat<T> = lift(c);
    let cy = &cc * &y;
    let s = Mat::from_fn(p, p, |i, j| if i == j { T::from_re(1.0) - cy[(i, j)] } else { -cy[(i, j)] });
    let cxs = &cc * &xs;
    let ws = solve_small(s.as_ref(), cxs.as_ref(), "SMW midmatrix I - C Y")
        .map_err(|e| Error::Numerical(format!("feedback-shifted pencil is singular: {e}")))?;
    Ok(&xs + &y * &ws)
}
