//! Closed-form x-blocks of the small Sylvester equation `−s_wᵀ x⁻¹ − x⁻¹ s_v + l_wᵀ l_v + wᵀB̂Cv = 0`.

use faer::{Mat, MatRef};

use super::cases::CaseShifts;
use crate::error::{Error, Result};
use crate::linalg::dense::{all_finite, eye, inverse_small, rows, upper_block};

/// `Σ cᵢ Mᵢ` over same-shaped matrices.
fn comb(terms: &[(f64, &Mat<f64>)]) -> Mat<f64> {
    let (r, c) = (terms[0].1.nrows(), terms[0].1.ncols());
    Mat::from_fn(r, c, |i, j| terms.iter().map(|(s, m)| s * m[(i, j)]).sum())
}

fn invert(q: Mat<f64>, what: &str) -> Result<Mat<f64>> {
    if !all_finite(q.as_ref()) {
        return Err(Error::Numerical(format!("{what}: non-finite entries (shift spectra collide)")));
    }
    inverse_small(q.as_ref(), what).map_err(|e| Error::Numerical(format!("{e} (shift spectra collide)")))
}

/// Compute the x-block of one step from the coupling `wᵀB̂` (q×p) and `Cv` (p×q).
pub fn compute_x(shifts: &CaseShifts, wt_bh: MatRef<'_, f64>, cv: MatRef<'_, f64>, m: usize) -> Result<Mat<f64>> {
    let q = shifts.slots() * m;
    if wt_bh.nrows() != q || cv.ncols() != q || wt_bh.ncols() != cv.nrows() {
        return Err(Error::Dimension(format!(
            "x-block coupling {}x{} · {}x{} for block width {q}",
            wt_bh.nrows(),
            wt_bh.ncols(),
            cv.nrows(),
            cv.ncols()
        )));
    }
    let im = eye(m);
    if let CaseShifts::I { alpha, beta } = *shifts {
        let g = &im + wt_bh * cv;
        let inv = invert(g, "I + wᵀB̂Cv")?;
        return Ok(comb(&[(-(alpha + beta), &inv)]));
    }

    // Split the coupling into primary/secondary halves.
    let bhr = rows(wt_bh, 0, m);
    let bhi = rows(wt_bh, m, m);
    let cr = cv.submatrix(0, 0, cv.nrows(), m).to_owned();
    let ci = cv.submatrix(0, m, cv.nrows(), m).to_owned();
    let rr = &bhr * &cr;
    let ri = &bhr * &ci;
    let ir = &bhi * &cr;
    let ii = &bhi * &ci;

    let (x1, x2, x3, x4) = match *shifts {
        CaseShifts::II { alpha, beta } => {
            let (ar, ai, br, bi) = (alpha.re, alpha.im, beta.re, beta.im);
            let s = ar + br;
            let d_r = s * s + ai * ai - bi * bi;
            let d_i = 2.0 * s * bi;
            let dd = d_r * d_r + d_i * d_i;
            // (s·bhr − bi·bhi)·cr expands to s·rr − bi·ir, and so on.
            let n1r = comb(&[(-s, &im), (-s, &rr), (bi, &ir), (-ai, &ri)]);
            let n1i = comb(&[(-bi, &im), (-s, &ir), (-bi, &rr), (-ai, &ii)]);
            let n2r = comb(&[(ai, &im), (ai, &rr), (-s, &ri), (bi, &ii)]);
            let n2i = comb(&[(ai, &ir), (-s, &ii), (-bi, &ri)]);
            (
                comb(&[(d_r / dd, &n1r), (d_i / dd, &n1i)]),
                comb(&[(d_r / dd, &n2r), (d_i / dd, &n2i)]),
                comb(&[(d_r / dd, &n1i), (-d_i / dd, &n1r)]),
                comb(&[(d_r / dd, &n2i), (-d_i / dd, &n2r)]),
            )
        }
        CaseShifts::III { alpha, beta, beta2 } => {
            let (ar, ai) = (alpha.re, alpha.im);
            let sa = ar + beta;
            let ma = ar + beta2;
            let da = sa * sa + ai * ai;
            let ea = ma * ma + ai * ai;
            let g = (ai * ai - sa * ma) / (da * ea);
            let h = ai * (sa + ma) / (da * ea);
            (
                comb(&[(-sa / da, &im), (-sa / da, &rr), (-ai / da, &ri)]),
                comb(&[(ai / da, &im), (ai / da, &rr), (-sa / da, &ri)]),
                comb(&[(g, &im), (g, &rr), (-h, &ri), (-ma / ea, &ir), (-ai / ea, &ii)]),
                comb(&[(h, &im), (h, &rr), (g, &ri), (ai / ea, &ir), (-ma / ea, &ii)]),
            )
        }
        CaseShifts::IV { alpha, alpha2, beta } => {
            let (br, bi) = (beta.re, beta.im);
            let sb = alpha + br;
            let mb = alpha2 + br;
            let db = sb * sb + bi * bi;
            let eb = mb * mb + bi * bi;
            let g = (bi * bi - sb * mb) / (db * eb);
            let h = bi * (sb + mb) / (db * eb);
            (
                comb(&[(-sb / db, &im), (-sb / db, &rr), (-bi / db, &ir)]),
                comb(&[(g, &im), (g, &rr), (-h, &ir), (-mb / eb, &ri), (-bi / eb, &ii)]),
                comb(&[(bi / db, &im), (bi / db, &rr), (-sb / db, &ir)]),
                comb(&[(h, &im), (h, &rr), (g, &ir), (bi / eb, &ri), (-mb / eb, &ii)]),
            )
        }
        CaseShifts::I { .. } => unreachable!(),
    };

    let mut qm = upper_block(x1.as_ref(), x2.as_ref(), x4.as_ref());
    qm.as_mut().submatrix_mut(m, 0, m, m).copy_from(x3.as_ref());
    invert(qm, "x-block q-matrix")
}
