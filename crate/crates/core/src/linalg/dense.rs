//! Small dense helpers on top of `faer`.

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};

/// Scalar types the solvers run in: `f64` for real shifts, `c64` for complex ones.
pub trait Scalar: faer::traits::ComplexField<Real = f64> + Copy + std::fmt::Debug + Send + Sync + 'static {
    fn from_re(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn is_finite_scalar(self) -> bool;
    fn to_c64(self) -> c64;
}

impl Scalar for f64 {
    fn from_re(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_finite_scalar(self) -> bool {
        self.is_finite()
    }
    fn to_c64(self) -> c64 {
        c64::new(self, 0.0)
    }
}

impl Scalar for c64 {
    fn from_re(x: f64) -> Self {
        c64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_finite_scalar(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_c64(self) -> c64 {
        self
    }
}

/// A dense block tagged with its scalar domain.
#[derive(Clone, Debug)]
pub enum DenseBlock {
    Real(Mat<f64>),
    Complex(Mat<c64>),
}

impl DenseBlock {
    pub fn nrows(&self) -> usize {
        match self {
            DenseBlock::Real(m) => m.nrows(),
            DenseBlock::Complex(m) => m.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            DenseBlock::Real(m) => m.ncols(),
            DenseBlock::Complex(m) => m.ncols(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, DenseBlock::Complex(_))
    }

    pub fn to_complex(&self) -> Mat<c64> {
        match self {
            DenseBlock::Real(m) => lift(m.as_ref()),
            DenseBlock::Complex(m) => m.clone(),
        }
    }

    pub fn real_part(&self) -> Mat<f64> {
        match self {
            DenseBlock::Real(m) => m.clone(),
            DenseBlock::Complex(m) => re(m.as_ref()),
        }
    }

    pub fn imag_part(&self) -> Mat<f64> {
        match self {
            DenseBlock::Real(m) => Mat::zeros(m.nrows(), m.ncols()),
            DenseBlock::Complex(m) => im(m.as_ref()),
        }
    }

    /// The real matrix, or an error if the block carries a complex tag.
    pub fn into_real(self) -> Result<Mat<f64>> {
        match self {
            DenseBlock::Real(m) => Ok(m),
            DenseBlock::Complex(_) => Err(Error::Numerical("expected a real block".into())),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            DenseBlock::Real(m) => all_finite(m.as_ref()),
            DenseBlock::Complex(m) => all_finite(m.as_ref()),
        }
    }
}

impl From<Mat<f64>> for DenseBlock {
    fn from(m: Mat<f64>) -> Self {
        DenseBlock::Real(m)
    }
}

impl From<Mat<c64>> for DenseBlock {
    fn from(m: Mat<c64>) -> Self {
        DenseBlock::Complex(m)
    }
}

pub fn lift<T: Scalar>(m: MatRef<'_, f64>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| T::from_re(m[(i, j)]))
}

pub fn re(m: MatRef<'_, c64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

pub fn im(m: MatRef<'_, c64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].im)
}

pub fn all_finite<T: Scalar>(m: MatRef<'_, T>) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].is_finite_scalar()))
}

pub fn scale<T: Scalar>(m: MatRef<'_, T>, s: T) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

pub fn eye(n: usize) -> Mat<f64> {
    Mat::identity(n, n)
}

/// Horizontal concatenation `[a, b, ...]`; all blocks must share a row count.
pub fn hcat<T: Scalar>(blocks: &[MatRef<'_, T>]) -> Mat<T> {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hcat row mismatch");
        out.as_mut().submatrix_mut(0, off, rows, b.ncols()).copy_from(*b);
        off += b.ncols();
    }
    out
}

/// Vertical concatenation `[a; b; ...]`; all blocks must share a column count.
pub fn vcat<T: Scalar>(blocks: &[MatRef<'_, T>]) -> Mat<T> {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vcat column mismatch");
        out.as_mut().submatrix_mut(off, 0, b.nrows(), cols).copy_from(*b);
        off += b.nrows();
    }
    out
}

/// `[[tl, tr], [0, br]]`
pub fn upper_block<T: Scalar>(tl: MatRef<'_, T>, tr: MatRef<'_, T>, br: MatRef<'_, T>) -> Mat<T> {
    let (r0, c0) = (tl.nrows(), tl.ncols());
    let (r1, c1) = (br.nrows(), br.ncols());
    assert_eq!(tr.nrows(), r0);
    assert_eq!(tr.ncols(), c1);
    let mut out = Mat::zeros(r0 + r1, c0 + c1);
    out.as_mut().submatrix_mut(0, 0, r0, c0).copy_from(tl);
    out.as_mut().submatrix_mut(0, c0, r0, c1).copy_from(tr);
    out.as_mut().submatrix_mut(r0, c0, r1, c1).copy_from(br);
    out
}

pub fn block_diag(blocks: &[MatRef<'_, f64>]) -> Mat<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.as_mut().submatrix_mut(r, c, b.nrows(), b.ncols()).copy_from(*b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Mat<f64> {
    let (p, q) = (b.nrows(), b.ncols());
    Mat::from_fn(a.nrows() * p, a.ncols() * q, |i, j| a[(i / p, j / q)] * b[(i % p, j % q)])
}

pub fn fro<T: Scalar>(m: MatRef<'_, T>) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let a = m[(i, j)].modulus();
            s += a * a;
        }
    }
    s.sqrt()
}

pub fn max_abs<T: Scalar>(m: MatRef<'_, T>) -> f64 {
    let mut s: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s = s.max(m[(i, j)].modulus());
        }
    }
    s
}

/// Largest singular value of a dense matrix.
pub fn norm2<T: Scalar>(m: MatRef<'_, T>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    match m.singular_values() {
        Ok(s) => s.iter().cloned().fold(0.0, f64::max),
        Err(_) => f64::NAN,
    }
}

/// Ratio of extreme singular values; `inf` for a singular matrix.
pub fn cond2<T: Scalar>(m: MatRef<'_, T>) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    match m.singular_values() {
        Ok(s) => {
            let hi = s.iter().cloned().fold(0.0, f64::max);
            let lo = s.iter().cloned().fold(f64::INFINITY, f64::min);
            if lo == 0.0 || !hi.is_finite() {
                f64::INFINITY
            } else {
                hi / lo
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Reciprocal-condition cutoff below which a small dense system is treated as singular.
pub const SINGULAR_RCOND: f64 = 1e-14;

/// Systems up to this order get an exact condition number from singular values.
const SVD_CHECK_MAX: usize = 64;

/// Solve `m x = rhs` for a small dense square `m`, rejecting numerically singular systems.
pub fn solve_small<T: Scalar>(m: MatRef<'_, T>, rhs: MatRef<'_, T>, what: &str) -> Result<Mat<T>> {
    use faer::linalg::solvers::Solve;
    if m.nrows() != m.ncols() || m.nrows() != rhs.nrows() {
        return Err(Error::Dimension(format!(
            "{what}: {}x{} system with {} right-hand-side rows",
            m.nrows(),
            m.ncols(),
            rhs.nrows()
        )));
    }
    if m.nrows() == 0 {
        return Ok(Mat::zeros(0, rhs.ncols()));
    }
    let singular = || Error::Singular(format!("{what}: matrix is numerically singular"));
    if !all_finite(m) {
        return Err(singular());
    }
    let n = m.nrows();
    let lu = m.partial_piv_lu();
    if n <= SVD_CHECK_MAX {
        if cond2(m) * SINGULAR_RCOND > 1.0 {
            return Err(singular());
        }
    } else {
        // one-norm condition lower bound from a probe solve
        let b: Mat<T> = Mat::from_fn(n, 1, |i, _| T::from_re(1.0 + ((i * 7919) % 13) as f64 / 13.0));
        let y = lu.solve(b.as_ref());
        let norm1 = |v: MatRef<'_, T>| (0..n).map(|i| v[(i, 0)].modulus()).sum::<f64>();
        let m1 = (0..n).map(|j| (0..n).map(|i| m[(i, j)].modulus()).sum::<f64>()).fold(0.0, f64::max);
        let est = m1 * norm1(y.as_ref()) / norm1(b.as_ref());
        if !(est * SINGULAR_RCOND <= 1.0) {
            return Err(singular());
        }
    }
    let x = lu.solve(rhs);
    if !all_finite(x.as_ref()) {
        return Err(Error::Singular(format!("{what}: solve produced non-finite values")));
    }
    Ok(x)
}

pub fn inverse_small<T: Scalar>(m: MatRef<'_, T>, what: &str) -> Result<Mat<T>> {
    let id: Mat<T> = lift(eye(m.nrows()).as_ref());
    solve_small(m, id.as_ref(), what)
}

/// Columns `[start, start + count)`.
pub fn cols(m: MatRef<'_, f64>, start: usize, count: usize) -> Mat<f64> {
    m.submatrix(0, start, m.nrows(), count).to_owned()
}

/// Rows `[start, start + count)`.
pub fn rows(m: MatRef<'_, f64>, start: usize, count: usize) -> Mat<f64> {
    m.submatrix(start, 0, count, m.ncols()).to_owned()
}

/// Multiply a real matrix by a complex one.
pub fn rc_mul(a: MatRef<'_, f64>, b: MatRef<'_, c64>) -> Mat<c64> {
    let ac: Mat<c64> = lift(a);
    &ac * b
}
