//! Shift sequences and their grouping into the four step cases.

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dense::{eye, kron};

/// Shifts with `|Im| ≤ REAL_TOL` are treated as real.
pub const REAL_TOL: f64 = crate::linalg::factor::REAL_TOL;
/// Shifts must satisfy `Re < −VALID_TOL`.
pub const VALID_TOL: f64 = 1e-8;

pub fn is_real(z: c64) -> bool {
    z.im.abs() <= REAL_TOL
}

fn is_conj_of(next: c64, z: c64) -> bool {
    (next - z.conj()).norm() <= REAL_TOL * z.norm().max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftOrigin {
    User,
    Auto,
}

/// Paired shift lists `(α_k, β_k)` with the origin of each slot.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShiftSequence {
    pub alpha: Vec<c64>,
    pub beta: Vec<c64>,
    pub origin: Vec<ShiftOrigin>,
}

impl ShiftSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(c64, c64)], origin: ShiftOrigin) -> Self {
        let mut s = Self::new();
        for &(a, b) in pairs {
            s.push(a, b, origin);
        }
        s
    }

    /// Same values on both sides.
    pub fn symmetric(shifts: &[c64], origin: ShiftOrigin) -> Self {
        let mut s = Self::new();
        for &z in shifts {
            s.push(z, z, origin);
        }
        s
    }

    pub fn push(&mut self, alpha: c64, beta: c64, origin: ShiftOrigin) {
        self.alpha.push(alpha);
        self.beta.push(beta);
        self.origin.push(origin);
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// First `k` slots.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            alpha: self.alpha[..k].to_vec(),
            beta: self.beta[..k].to_vec(),
            origin: self.origin[..k].to_vec(),
        }
    }

    /// Group all slots into steps.
    pub fn cases(&self) -> Result<Vec<CaseShifts>> {
        let mut out = Vec::new();
        let mut k = 0;
        while k < self.len() {
            let cs = classify_case(self, k)?;
            k += cs.slots();
            out.push(cs);
        }
        Ok(out)
    }

    /// Every shift must have `Re < −1e-8` on both sides.
    pub fn check_stable(&self) -> Result<()> {
        for (k, (a, b)) in self.alpha.iter().zip(&self.beta).enumerate() {
            for (name, z) in [("alpha", a), ("beta", b)] {
                if !(z.re < -VALID_TOL) || !z.im.is_finite() {
                    return Err(Error::ShiftRejected(format!(
                        "{name}[{k}] = {z} must have real part below -{VALID_TOL:e}"
                    )));
                }
            }
        }
        if self.alpha.len() != self.beta.len() {
            return Err(Error::InvalidInput("alpha and beta lists differ in length".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
    IV,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
        }
    }

    pub fn slots(self) -> usize {
        if self == Case::I {
            1
        } else {
            2
        }
    }
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The shifts consumed by one step, grouped by case.
///
/// Complex entries hold the first member of the conjugate pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CaseShifts {
    I { alpha: f64, beta: f64 },
    II { alpha: c64, beta: c64 },
    III { alpha: c64, beta: f64, beta2: f64 },
    IV { alpha: f64, alpha2: f64, beta: c64 },
}

impl CaseShifts {
    pub fn case(&self) -> Case {
        match self {
            CaseShifts::I { .. } => Case::I,
            CaseShifts::II { .. } => Case::II,
            CaseShifts::III { .. } => Case::III,
            CaseShifts::IV { .. } => Case::IV,
        }
    }

    pub fn slots(&self) -> usize {
        self.case().slots()
    }

    /// α values of the consumed slots, in order.
    pub fn alphas(&self) -> Vec<c64> {
        match *self {
            CaseShifts::I { alpha, .. } => vec![c64::new(alpha, 0.0)],
            CaseShifts::II { alpha, .. } | CaseShifts::III { alpha, .. } => vec![alpha, alpha.conj()],
            CaseShifts::IV { alpha, alpha2, .. } => vec![c64::new(alpha, 0.0), c64::new(alpha2, 0.0)],
        }
    }

    /// β values of the consumed slots, in order.
    pub fn betas(&self) -> Vec<c64> {
        match *self {
            CaseShifts::I { beta, .. } => vec![c64::new(beta, 0.0)],
            CaseShifts::II { beta, .. } | CaseShifts::IV { beta, .. } => vec![beta, beta.conj()],
            CaseShifts::III { beta, beta2, .. } => vec![c64::new(beta, 0.0), c64::new(beta2, 0.0)],
        }
    }

    /// The `(s_v, l_v, s_w, l_w)` blocks of this step (interpolation data increments).
    pub fn small_blocks(&self, m: usize) -> SmallBlocks {
        let im = eye(m);
        let pair_l = kron(Mat::from_fn(1, 2, |_, j| if j == 0 { -1.0 } else { 0.0 }).as_ref(), im.as_ref());
        let complex_s = |z: c64| {
            let base = Mat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 0) | (1, 1) => -z.re,
                (0, 1) => -z.im,
                _ => z.im,
            });
            kron(base.as_ref(), im.as_ref())
        };
        let real_pair_s = |a: f64, a2: f64| {
            let base = Mat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 0) => -a,
                (0, 1) => 1.0,
                (1, 1) => -a2,
                _ => 0.0,
            });
            kron(base.as_ref(), im.as_ref())
        };
        let neg_i = || Mat::from_fn(m, m, |i, j| if i == j { -1.0 } else { 0.0 });
        match *self {
            CaseShifts::I { alpha, beta } => SmallBlocks {
                s_v: Mat::from_fn(m, m, |i, j| if i == j { -alpha } else { 0.0 }),
                l_v: neg_i(),
                s_w: Mat::from_fn(m, m, |i, j| if i == j { -beta } else { 0.0 }),
                l_w: neg_i(),
            },
            CaseShifts::II { alpha, beta } => {
                SmallBlocks { s_v: complex_s(alpha), l_v: pair_l.clone(), s_w: complex_s(beta), l_w: pair_l }
            }
            CaseShifts::III { alpha, beta, beta2 } => SmallBlocks {
                s_v: complex_s(alpha),
                l_v: pair_l.clone(),
                s_w: real_pair_s(beta, beta2),
                l_w: pair_l,
            },
            CaseShifts::IV { alpha, alpha2, beta } => SmallBlocks {
                s_v: real_pair_s(alpha, alpha2),
                l_v: pair_l.clone(),
                s_w: complex_s(beta),
                l_w: pair_l,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmallBlocks {
    pub s_v: Mat<f64>,
    pub l_v: Mat<f64>,
    pub s_w: Mat<f64>,
    pub l_w: Mat<f64>,
}

/// Group the shifts starting at slot `k` into a step case.
pub fn classify_case(s: &ShiftSequence, k: usize) -> Result<CaseShifts> {
    if k >= s.len() {
        return Err(Error::ShiftOrdering(format!("slot {k} is past the end of a {}-slot sequence", s.len())));
    }
    let (a, b) = (s.alpha[k], s.beta[k]);
    let next = s.alpha.get(k + 1).copied().zip(s.beta.get(k + 1).copied());
    let missing = || {
        Error::ShiftOrdering(format!(
            "complex shift at slot {k} (alpha = {a}, beta = {b}) has no following slot holding its conjugate"
        ))
    };
    match (is_real(a), is_real(b)) {
        (true, true) => Ok(CaseShifts::I { alpha: a.re, beta: b.re }),
        (false, false) => {
            let (a1, b1) = next.ok_or_else(missing)?;
            if is_conj_of(a1, a) && is_conj_of(b1, b) {
                Ok(CaseShifts::II { alpha: a, beta: b })
            } else {
                Err(missing())
            }
        }
        (false, true) => {
            let (a1, b1) = next.ok_or_else(missing)?;
            if is_conj_of(a1, a) && is_real(b1) {
                Ok(CaseShifts::III { alpha: a, beta: b.re, beta2: b1.re })
            } else {
                Err(missing())
            }
        }
        (true, false) => {
            let (a1, b1) = next.ok_or_else(missing)?;
            if is_real(a1) && is_conj_of(b1, b) {
                Ok(CaseShifts::IV { alpha: a.re, alpha2: a1.re, beta: b })
            } else {
                Err(missing())
            }
        }
    }
}
