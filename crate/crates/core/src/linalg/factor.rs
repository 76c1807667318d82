//! Sparse LU of shifted pencils `A + σE`, real or complex.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use faer::{c64, Mat, MatRef};

use super::dense::{all_finite, lift, DenseBlock, Scalar};
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// Imaginary parts at or below this magnitude select the real factorization path.
pub const REAL_TOL: f64 = 1e-8;

/// Condition estimate above which a shifted pencil is reported as singular.
const MAX_COND_ESTIMATE: f64 = 1e14;

enum Factor {
    Real(Lu<usize, f64>),
    Complex(Lu<usize, c64>),
}

/// A reusable factorization of `A + σE`.
pub struct ShiftedFactorization {
    shift: c64,
    dim: usize,
    factor: Factor,
}

impl std::fmt::Debug for ShiftedFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ShiftedFactorization")
            .field("shift", &self.shift)
            .field("dim", &self.dim)
            .field("complex", &self.is_complex())
            .finish()
    }
}

fn assemble<T: Scalar>(a: &SparseMatrix, e: &SparseMatrix, sigma: T) -> Result<SparseColMat<usize, T>> {
    let mut t: Vec<Triplet<usize, usize, T>> = Vec::with_capacity(a.nnz() + e.nnz());
    t.extend(a.triplets().map(|(r, c, v)| Triplet::new(r, c, T::from_re(v))));
    t.extend(e.triplets().map(|(r, c, v)| Triplet::new(r, c, T::from_re(v) * sigma)));
    SparseColMat::try_new_from_triplets(a.nrows(), a.ncols(), &t)
        .map_err(|e| Error::Numerical(format!("assembling shifted pencil: {e:?}")))
}

fn probe_rhs<T: Scalar>(n: usize) -> Mat<T> {
    Mat::from_fn(n, 1, |i, _| T::from_re(1.0 + ((i * 7919) % 13) as f64 / 13.0))
}

fn col_norm1<T: Scalar>(m: MatRef<'_, T>) -> f64 {
    (0..m.nrows()).map(|i| m[(i, 0)].modulus()).sum()
}

fn factor_checked<T: Scalar>(
    a: &SparseMatrix,
    e: &SparseMatrix,
    sigma: T,
    pencil_norm: f64,
) -> Result<Lu<usize, T>> {
    let m = assemble(a, e, sigma)?;
    let lu = m
        .as_ref()
        .sp_lu()
        .map_err(|err| Error::Singular(format!("A + σE at σ = {:?}: {err:?}", sigma.to_c64())))?;
    let b = probe_rhs::<T>(a.nrows());
    let x = lu.solve(b.as_ref());
    let est = pencil_norm * col_norm1(x.as_ref()) / col_norm1(b.as_ref());
    if !all_finite(x.as_ref()) || !(est < MAX_COND_ESTIMATE) {
        return Err(Error::Singular(format!(
            "A + σE is numerically singular at σ = {:?} (condition estimate {est:.3e})",
            sigma.to_c64()
        )));
    }
    Ok(lu)
}

/// Factor `A + σE`. A real factorization is used when `|Im σ| ≤ 1e-8`.
pub fn shifted_factorize(a: &SparseMatrix, e: &SparseMatrix, sigma: c64) -> Result<ShiftedFactorization> {
    if !a.is_square() || !e.is_square() || a.nrows() != e.nrows() {
        return Err(Error::Dimension(format!(
            "shifted pencil needs square A, E of equal size, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            e.nrows(),
            e.ncols()
        )));
    }
    let pencil_norm = a.norm1() + sigma.norm() * e.norm1();
    let factor = if sigma.im.abs() <= REAL_TOL {
        Factor::Real(factor_checked(a, e, sigma.re, pencil_norm)?)
    } else {
        Factor::Complex(factor_checked(a, e, sigma, pencil_norm)?)
    };
    Ok(ShiftedFactorization { shift: sigma, dim: a.nrows(), factor })
}

impl ShiftedFactorization {
    pub fn shift(&self) -> c64 {
        self.shift
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.factor, Factor::Complex(_))
    }

    /// Solve with a real right-hand side.
    pub fn solve_real(&self, rhs: MatRef<'_, f64>) -> Result<DenseBlock> {
        self.check_rows(rhs.nrows())?;
        let out = match &self.factor {
            Factor::Real(lu) => DenseBlock::Real(lu.solve(rhs)),
            Factor::Complex(lu) => {
                let r: Mat<c64> = lift(rhs);
                DenseBlock::Complex(lu.solve(r.as_ref()))
            }
        };
        self.check_finite(out)
    }

    /// Solve with a complex right-hand side; the result is always complex.
    pub fn solve_complex(&self, rhs: MatRef<'_, c64>) -> Result<Mat<c64>> {
        self.check_rows(rhs.nrows())?;
        let out = match &self.factor {
            Factor::Complex(lu) => lu.solve(rhs),
            Factor::Real(lu) => {
                let xr = lu.solve(super::dense::re(rhs).as_ref());
                let xi = lu.solve(super::dense::im(rhs).as_ref());
                Mat::from_fn(rhs.nrows(), rhs.ncols(), |i, j| c64::new(xr[(i, j)], xi[(i, j)]))
            }
        };
        match self.check_finite(DenseBlock::Complex(out))? {
            DenseBlock::Complex(m) => Ok(m),
            DenseBlock::Real(_) => unreachable!(),
        }
    }

    fn check_rows(&self, rows: usize) -> Result<()> {
        if rows != self.dim {
            return Err(Error::Dimension(format!(
                "right-hand side has {rows} rows, factorization has dimension {}",
                self.dim
            )));
        }
        Ok(())
    }

    fn check_finite(&self, out: DenseBlock) -> Result<DenseBlock> {
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::Singular(format!("shifted solve at σ = {} produced non-finite values", self.shift)))
        }
    }
}

/// Solve `(A + σE) Y = RHS`. The result is complex when either side is.
pub fn solve_factored(f: &ShiftedFactorization, rhs: &DenseBlock) -> Result<DenseBlock> {
    match rhs {
        DenseBlock::Real(r) => f.solve_real(r.as_ref()),
        DenseBlock::Complex(r) => f.solve_complex(r.as_ref()).map(DenseBlock::Complex),
    }
}
