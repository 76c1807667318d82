//! Linear-algebra substrate: sparse storage, shifted factorizations, small dense kernels, Matrix Market I/O.

pub mod dense;
pub mod factor;
pub mod mm;
pub mod sparse;

use faer::{c64, Mat, MatRef};

pub use dense::DenseBlock;
pub use factor::{shifted_factorize, solve_factored, ShiftedFactorization};
pub use sparse::SparseMatrix;

use crate::error::{Error, Result};
use dense::inverse_small;

/// `‖L·R‖₂` through the small eigenproblem of `(LᵀL)(RRᵀ)`; the n×n̂ product is never formed.
pub fn spectral_norm_product(l: MatRef<'_, f64>, r: MatRef<'_, f64>) -> Result<f64> {
    if l.ncols() != r.nrows() {
        return Err(Error::Dimension(format!(
            "low-rank product {}x{} times {}x{}",
            l.nrows(),
            l.ncols(),
            r.nrows(),
            r.ncols()
        )));
    }
    if l.ncols() == 0 {
        return Ok(0.0);
    }
    let gl = l.transpose() * l;
    let gr = r * r.transpose();
    let prod = &gl * &gr;
    let eigs = prod
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("Gram eigenvalues: {e:?}")))?;
    let top = eigs.iter().map(|z| z.re.max(0.0)).fold(0.0, f64::max);
    Ok(top.sqrt())
}

/// Drop tolerance for columns during orthonormalization (absolute, on normalized columns).
pub const ORTH_DROP_TOL: f64 = 1e-12;

/// Orthonormal basis of the column span, by Gram–Schmidt with one reorthogonalization pass.
pub fn thin_orth(m: MatRef<'_, f64>) -> Mat<f64> {
    let n = m.nrows();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for j in 0..m.ncols() {
        let mut v: Vec<f64> = (0..n).map(|i| m[(i, j)]).collect();
        let nrm = norm(&v);
        if nrm == 0.0 || !nrm.is_finite() {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= nrm);
        for _ in 0..2 {
            for q in &basis {
                let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= d * qi);
            }
        }
        let rest = norm(&v);
        if rest < ORTH_DROP_TOL {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= rest);
        basis.push(v);
    }
    Mat::from_fn(n, basis.len(), |i, j| basis[j][i])
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Eigenvector condition above which a matrix is treated as defective.
pub const DEFECTIVE_COND: f64 = 1e12;

/// Eigendecomposition `M = T Λ T⁻¹` of a small dense matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<c64>,
    /// Right eigenvectors, unit 2-norm columns.
    pub vectors: Mat<c64>,
    /// `T⁻¹`; row `l` is the left eigenvector paired with column `l` of `vectors`.
    pub inverse: Mat<c64>,
}

pub fn dense_eig(m: MatRef<'_, f64>) -> Result<EigenDecomposition> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("eigendecomposition of a {}x{} matrix", m.nrows(), m.ncols())));
    }
    let k = m.nrows();
    if k == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: Mat::zeros(0, 0), inverse: Mat::zeros(0, 0) });
    }
    if !dense::all_finite(m) {
        return Err(Error::Numerical("eigendecomposition of a non-finite matrix".into()));
    }
    let eig = m.eigen().map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))?;
    let s = eig.S();
    let values: Vec<c64> = (0..k).map(|i| s[i]).collect();
    let u = eig.U();
    let mut vectors = u.to_owned();
    for j in 0..k {
        let nrm = dense::fro(vectors.as_ref().submatrix(0, j, k, 1));
        if nrm > 0.0 {
            for i in 0..k {
                vectors[(i, j)] /= c64::new(nrm, 0.0);
            }
        }
    }
    let cond = dense::cond2(vectors.as_ref());
    if !(cond < DEFECTIVE_COND) {
        return Err(Error::Defective(cond));
    }
    let inverse = inverse_small(vectors.as_ref(), "eigenvector matrix").map_err(|_| Error::Defective(cond))?;
    Ok(EigenDecomposition { values, vectors, inverse })
}

/// Eigenvalues of a small real matrix.
pub fn eigenvalues(m: MatRef<'_, f64>) -> Result<Vec<c64>> {
    if m.nrows() == 0 {
        return Ok(vec![]);
    }
    m.eigenvalues().map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))
}

/// Eigenvalues of a small complex matrix.
pub fn eigenvalues_c(m: MatRef<'_, c64>) -> Result<Vec<c64>> {
    if m.nrows() == 0 {
        return Ok(vec![]);
    }
    m.eigenvalues().map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))
}
