//! Matrix Market reader and writer (`real`/`integer` field, `general` symmetry).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use faer::{Mat, MatRef};

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// A matrix as stored on disk: coordinate files give sparse matrices, array files dense ones.
#[derive(Clone, Debug)]
pub enum MmMatrix {
    Sparse(SparseMatrix),
    Dense(Mat<f64>),
}

impl MmMatrix {
    pub fn into_dense(self) -> Mat<f64> {
        match self {
            MmMatrix::Sparse(s) => s.to_dense(),
            MmMatrix::Dense(d) => d,
        }
    }

    pub fn into_sparse(self) -> Result<SparseMatrix> {
        match self {
            MmMatrix::Sparse(s) => Ok(s),
            MmMatrix::Dense(d) => SparseMatrix::from_dense(d.as_ref()),
        }
    }
}

enum Layout {
    Coordinate,
    Array,
}

pub fn mm_read(path: &Path) -> Result<MmMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(path, &text)
}

pub fn read_dense(path: &Path) -> Result<Mat<f64>> {
    mm_read(path).map(MmMatrix::into_dense)
}

pub fn read_sparse(path: &Path) -> Result<SparseMatrix> {
    mm_read(path)?.into_sparse()
}

fn parse(path: &Path, text: &str) -> Result<MmMatrix> {
    let perr = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty file".into()))?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(perr(hline, format!("malformed header {header:?}")));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(perr(hline, format!("unknown layout {other:?}"))),
    };
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(Error::UnsupportedFormat { path: path.to_path_buf(), msg: format!("field {:?}", tokens[3]) });
    }
    if tokens[4] != "general" {
        return Err(Error::UnsupportedFormat { path: path.to_path_buf(), msg: format!("symmetry {:?}", tokens[4]) });
    }

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = body.next().ok_or_else(|| perr(hline, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| perr(sline, format!("bad size token {t:?}"))))
        .collect::<Result<_>>()?;

    let value = |line: usize, tok: &str| -> Result<f64> {
        let v: f64 = tok.parse().map_err(|_| perr(line, format!("bad value {tok:?}")))?;
        if !v.is_finite() {
            return Err(perr(line, format!("non-finite value {tok:?}")));
        }
        Ok(v)
    };

    match layout {
        Layout::Coordinate => {
            let [nr, nc, nnz] = dims[..] else {
                return Err(perr(sline, "coordinate size line needs rows, cols, entries".into()));
            };
            let mut t = Vec::with_capacity(nnz);
            for (line, l) in body.by_ref().take(nnz) {
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(perr(line, format!("expected 'row col value', got {l:?}")));
                }
                let idx = |tok: &str, bound: usize| -> Result<usize> {
                    let i: usize = tok.parse().map_err(|_| perr(line, format!("bad index {tok:?}")))?;
                    if i == 0 || i > bound {
                        return Err(perr(line, format!("index {i} out of bounds 1..={bound}")));
                    }
                    Ok(i - 1)
                };
                t.push((idx(toks[0], nr)?, idx(toks[1], nc)?, value(line, toks[2])?));
            }
            if t.len() != nnz {
                return Err(perr(text.lines().count(), format!("expected {nnz} entries, found {}", t.len())));
            }
            if let Some((line, _)) = body.next() {
                return Err(perr(line, "trailing data after last entry".into()));
            }
            SparseMatrix::from_triplets(nr, nc, &t)
                .map(MmMatrix::Sparse)
                .map_err(|e| perr(sline, e.to_string()))
        }
        Layout::Array => {
            let [nr, nc] = dims[..] else {
                return Err(perr(sline, "array size line needs rows, cols".into()));
            };
            let mut vals = Vec::with_capacity(nr * nc);
            for (line, l) in body.by_ref() {
                for tok in l.split_whitespace() {
                    vals.push((line, value(line, tok)?));
                }
            }
            if vals.len() != nr * nc {
                return Err(perr(
                    vals.last().map_or(sline, |v| v.0),
                    format!("expected {} values, found {}", nr * nc, vals.len()),
                ));
            }
            // column-major on disk
            Ok(MmMatrix::Dense(Mat::from_fn(nr, nc, |i, j| vals[j * nr + i].1)))
        }
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Write a sparse matrix in coordinate format. Values use shortest round-trip formatting.
pub fn mm_write_sparse(path: &Path, m: &SparseMatrix) -> Result<()> {
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(s, "{} {} {}", m.nrows(), m.ncols(), m.nnz());
    for (r, c, v) in m.triplets() {
        let _ = writeln!(s, "{} {} {:e}", r + 1, c + 1, v);
    }
    write(path, &s)
}

/// Write a dense matrix in array format (column-major).
pub fn mm_write_dense(path: &Path, m: MatRef<'_, f64>) -> Result<()> {
    let mut s = String::from("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(s, "{} {}", m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let _ = writeln!(s, "{:e}", m[(i, j)]);
        }
    }
    write(path, &s)
}

pub fn mm_write(path: &Path, m: &MmMatrix) -> Result<()> {
    match m {
        MmMatrix::Sparse(s) => mm_write_sparse(path, s),
        MmMatrix::Dense(d) => mm_write_dense(path, d.as_ref()),
    }
}
