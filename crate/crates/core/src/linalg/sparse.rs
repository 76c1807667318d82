//! Compressed sparse column storage for the pencil matrices.

use faer::{Mat, MatRef};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Build from `(row, col, value)` triplets. Duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        if nrows == 0 || ncols == 0 {
            return Err(Error::Dimension(format!("sparse matrix must be at least 1x1, got {nrows}x{ncols}")));
        }
        let mut sorted: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::Dimension(format!("entry ({r}, {c}) outside {nrows}x{ncols}")));
            }
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite entry at ({r}, {c})")));
            }
            sorted.push((c, r, v));
        }
        sorted.sort_by_key(|&(c, r, _)| (c, r));

        let mut col_ptr = vec![0usize; ncols + 1];
        let mut row_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (c, r, v) in sorted {
            if last == Some((c, r)) {
                *values.last_mut().unwrap() += v;
            } else {
                row_idx.push(r);
                values.push(v);
                col_ptr[c + 1] += 1;
                last = Some((c, r));
            }
        }
        for c in 0..ncols {
            col_ptr[c + 1] += col_ptr[c];
        }
        Ok(Self { nrows, ncols, col_ptr, row_idx, values })
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        Self::from_triplets(n, n, &t).expect("identity is well formed")
    }

    /// Constant-diagonal tridiagonal matrix with the given sub-, main and super-diagonal values.
    pub fn tridiagonal(n: usize, lower: f64, diag: f64, upper: f64) -> Self {
        let mut t = Vec::with_capacity(3 * n);
        for i in 0..n {
            if i > 0 {
                t.push((i, i - 1, lower));
            }
            t.push((i, i, diag));
            if i + 1 < n {
                t.push((i, i + 1, upper));
            }
        }
        Self::from_triplets(n, n, &t).expect("tridiagonal is well formed")
    }

    /// Sparse copy of a dense matrix, keeping only nonzero entries.
    pub fn from_dense(m: MatRef<'_, f64>) -> Result<Self> {
        let mut t = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if m[(i, j)] != 0.0 {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), &t)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterate stored entries in column order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.ncols).flat_map(move |c| {
            (self.col_ptr[c]..self.col_ptr[c + 1]).map(move |k| (self.row_idx[k], c, self.values[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.col_ptr[col]..self.col_ptr[col + 1];
        match self.row_idx[range.clone()].binary_search(&row) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<_> = self.triplets().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, &t).expect("transpose of a valid matrix")
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut out = Mat::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            out[(r, c)] = v;
        }
        out
    }

    /// `self · x`
    pub fn mul_dense(&self, x: MatRef<'_, f64>) -> Mat<f64> {
        assert_eq!(self.ncols, x.nrows(), "sparse-dense product dimension mismatch");
        let mut out = Mat::zeros(self.nrows, x.ncols());
        for j in 0..x.ncols() {
            for c in 0..self.ncols {
                let xv = x[(c, j)];
                if xv == 0.0 {
                    continue;
                }
                for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                    out[(self.row_idx[k], j)] += self.values[k] * xv;
                }
            }
        }
        out
    }

    /// `selfᵀ · x`
    pub fn tr_mul_dense(&self, x: MatRef<'_, f64>) -> Mat<f64> {
        assert_eq!(self.nrows, x.nrows(), "transposed sparse-dense product dimension mismatch");
        let mut out = Mat::zeros(self.ncols, x.ncols());
        for j in 0..x.ncols() {
            for c in 0..self.ncols {
                let mut s = 0.0;
                for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                    s += self.values[k] * x[(self.row_idx[k], j)];
                }
                out[(c, j)] = s;
            }
        }
        out
    }

    /// `x · self`, computed as `(selfᵀ xᵀ)ᵀ`.
    pub fn left_mul_dense(&self, x: MatRef<'_, f64>) -> Mat<f64> {
        self.tr_mul_dense(x.transpose()).transpose().to_owned()
    }

    /// Largest absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.ncols)
            .map(|c| self.values[self.col_ptr[c]..self.col_ptr[c + 1]].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
