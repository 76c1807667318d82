//! Dense certification of a low-rank solution: residual factorization, projected equation,
//! Sylvester identities, spectra, gains, interpolation and transfer-function identities.

use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use super::dense::{dense_residual, closed_loop_matrices, CompositeSpectralMatrix, DenseNareSolution};
use super::transfer::{reduced_transfer_eval, resolvent_solve, transfer_eval};
use crate::error::{Error, Result};
use crate::linalg::dense::{fro, inverse_small, lift, max_abs, norm2};
use crate::linalg::eigenvalues;
use crate::nradi::{densify_solution, CaseShifts, InterpolationData, LowRankSolution, ReducedModel, DENSIFY_CAP};
use crate::problem::NareProblem;

pub const RESIDUAL_IDENTITY_TOL: f64 = 1e-9;
pub const PROJECTED_NARE_TOL: f64 = 1e-9;
pub const SYLVESTER_TOL: f64 = 1e-9;
pub const SPECTRUM_TOL: f64 = 1e-8;
pub const TRIANGULAR_TOL: f64 = 1e-12;
pub const GAIN_TOL: f64 = 1e-10;
pub const INTERPOLATION_TOL: f64 = 1e-6;
pub const TRANSFER_IDENTITY_TOL: f64 = 1e-8;
pub const ORACLE_AGREEMENT_TOL: f64 = 1e-6;
pub const SPECTRAL_IDENTITY_TOL: f64 = 1e-8;

/// Frequencies at which the transfer-function identities are sampled.
pub const SAMPLE_POINTS: [(f64, f64); 3] = [(-1.0, 0.0), (-1.0, 1.0), (-10.0, 0.0)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `None` when skipped or when the quantity could not be computed.
    pub value: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `value ≤ threshold`.
    pub fn measured(name: &str, value: Result<f64>, threshold: f64) -> Self {
        Self::compare(name, value, threshold, |v, t| v <= t)
    }

    /// Passes when `value < threshold`.
    pub fn strictly_below(name: &str, value: Result<f64>, threshold: f64) -> Self {
        Self::compare(name, value, threshold, |v, t| v < t)
    }

    fn compare(name: &str, value: Result<f64>, threshold: f64, ok: impl Fn(f64, f64) -> bool) -> Self {
        match value {
            Ok(v) => {
                let pass = v.is_finite() && ok(v, threshold);
                Self {
                    name: name.into(),
                    value: v.is_finite().then_some(v),
                    threshold,
                    pass,
                    status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
                    note: (!v.is_finite()).then(|| format!("non-finite value {v}")),
                }
            }
            Err(e) => Self {
                name: name.into(),
                value: None,
                threshold,
                pass: false,
                status: CheckStatus::Fail,
                note: Some(e.to_string()),
            },
        }
    }

    pub fn skipped(name: &str, threshold: f64, why: &str) -> Self {
        Self { name: name.into(), value: None, threshold, pass: true, status: CheckStatus::Skipped, note: Some(why.into()) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub overall: Overall,
}

impl VerificationReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let mut r = Self { checks, overall: Overall::Pass };
        r.refresh();
        r
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
        self.refresh();
    }

    fn refresh(&mut self) {
        self.overall = if self.checks.iter().all(|c| c.pass) { Overall::Pass } else { Overall::Fail };
    }

    pub fn passed(&self) -> bool {
        self.overall == Overall::Pass
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

const LOW_RANK_CHECKS: [(&str, f64); 2] = [("residual-identity", RESIDUAL_IDENTITY_TOL), ("gains", GAIN_TOL)];
const PROJECTED_CHECKS: [(&str, f64); 14] = [
    ("projected-nare", PROJECTED_NARE_TOL),
    ("sylvester-v", SYLVESTER_TOL),
    ("sylvester-w", SYLVESTER_TOL),
    ("sylvester-x", SYLVESTER_TOL),
    ("sylvester-vb", SYLVESTER_TOL),
    ("sylvester-wc", SYLVESTER_TOL),
    ("block-triangular", TRIANGULAR_TOL),
    ("spectrum-sv", SPECTRUM_TOL),
    ("spectrum-sw", SPECTRUM_TOL),
    ("stabilizing-reduced", 0.0),
    ("interpolation", INTERPOLATION_TOL),
    ("interpolation-dual", INTERPOLATION_TOL),
    ("error-factorization", TRANSFER_IDENTITY_TOL),
    ("residual-transfer", TRANSFER_IDENTITY_TOL),
];

/// Run every check that applies; projected checks need `interp`.
pub fn verify_report(p: &NareProblem, sol: &LowRankSolution, interp: Option<&InterpolationData>) -> VerificationReport {
    let mut checks = Vec::new();
    if sol.rank() == 0 {
        for (name, t) in LOW_RANK_CHECKS.iter().chain(&PROJECTED_CHECKS) {
            checks.push(Check::skipped(name, *t, "empty solution"));
        }
        return VerificationReport::new(checks);
    }
    let ctx = match Context::new(p, sol) {
        Ok(c) => c,
        Err(e) => {
            let all = LOW_RANK_CHECKS.iter().chain(&PROJECTED_CHECKS);
            return VerificationReport::new(all.map(|(n, t)| Check::measured(n, Err(clone_err(&e)), *t)).collect());
        }
    };
    checks.push(Check::measured("residual-identity", ctx.residual_identity(), RESIDUAL_IDENTITY_TOL));
    checks.push(Check::measured("gains", ctx.gains(), GAIN_TOL));

    let Some(d) = interp else {
        for (name, t) in PROJECTED_CHECKS {
            checks.push(Check::skipped(name, t, "no interpolation data"));
        }
        return VerificationReport::new(checks);
    };
    let red = d.reduced(sol.xbar.as_ref(), ctx.bh_r.as_ref(), ctx.c_r.as_ref());
    checks.push(Check::measured("projected-nare", ctx.projected_nare(&red), PROJECTED_NARE_TOL));
    checks.push(Check::measured("sylvester-v", ctx.sylvester_v(d), SYLVESTER_TOL));
    checks.push(Check::measured("sylvester-w", ctx.sylvester_w(d), SYLVESTER_TOL));
    checks.push(Check::measured("sylvester-x", ctx.sylvester_x(d), SYLVESTER_TOL));
    checks.push(Check::measured("sylvester-vb", ctx.sylvester_vb(d, &red), SYLVESTER_TOL));
    checks.push(Check::measured("sylvester-wc", ctx.sylvester_wc(d, &red), SYLVESTER_TOL));
    checks.push(Check::measured("block-triangular", ctx.block_triangular(d), TRIANGULAR_TOL));
    checks.push(Check::measured("spectrum-sv", ctx.spectrum(d.s_v.as_ref(), true), SPECTRUM_TOL));
    checks.push(Check::measured("spectrum-sw", ctx.spectrum(d.s_w.as_ref(), false), SPECTRUM_TOL));
    checks.push(Check::strictly_below("stabilizing-reduced", ctx.stabilizing(&red), 0.0));
    checks.push(Check::measured("interpolation", ctx.interpolation(&red), INTERPOLATION_TOL));
    checks.push(Check::measured("interpolation-dual", ctx.interpolation_dual(&red), INTERPOLATION_TOL));
    checks.push(Check::measured("error-factorization", ctx.error_factorization(d, &red), TRANSFER_IDENTITY_TOL));
    checks.push(Check::measured("residual-transfer", ctx.residual_transfer(), TRANSFER_IDENTITY_TOL));
    VerificationReport::new(checks)
}

/// `verify_report` plus agreement with the dense stabilizing solution and the composite spectral identity.
pub fn verify_report_with_oracle(
    p: &NareProblem,
    sol: &LowRankSolution,
    interp: Option<&InterpolationData>,
    oracle: &DenseNareSolution,
) -> VerificationReport {
    let mut r = verify_report(p, sol, interp);
    let agreement = densify_solution(sol, DENSIFY_CAP).map(|x| {
        let nx = norm2(oracle.x.as_ref());
        let diff = norm2((&x - &oracle.x).as_ref());
        if nx > 0.0 {
            diff / nx
        } else {
            diff
        }
    });
    r.push(Check::measured("oracle-agreement", agreement, ORACLE_AGREEMENT_TOL));
    r.push(Check::measured("spectral-identity", spectral_identity(p, oracle.x.as_ref()), SPECTRAL_IDENTITY_TOL));
    r
}

/// Largest relative mismatch between `λ(𝒦)` and `λ(A_cl) ∪ λ(−Â_cl)`.
pub fn spectral_identity(p: &NareProblem, x: MatRef<'_, f64>) -> Result<f64> {
    let k = CompositeSpectralMatrix::new(p)?.eigenvalues()?;
    let (a_cl, ah_cl) = closed_loop_matrices(p, x)?;
    let mut expected = eigenvalues(a_cl.as_ref())?;
    expected.extend(eigenvalues(ah_cl.as_ref())?.into_iter().map(|z| -z));
    multiset_distance(&k, &expected)
}

/// Greedy nearest matching of two eigenvalue multisets; distances relative to `max(1, |λ|)`.
pub fn multiset_distance(computed: &[c64], expected: &[c64]) -> Result<f64> {
    if computed.len() != expected.len() {
        return Err(Error::Dimension(format!("{} eigenvalues against {} expected", computed.len(), expected.len())));
    }
    let mut used = vec![false; computed.len()];
    let mut order: Vec<&c64> = expected.iter().collect();
    order.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut worst: f64 = 0.0;
    for z in order {
        let (best, d) = computed
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, w)| (i, (w - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("lengths match");
        used[best] = true;
        worst = worst.max(d / z.norm().max(1.0));
    }
    Ok(worst)
}

fn clone_err(e: &Error) -> Error {
    Error::Numerical(e.to_string())
}

fn sum_rel(terms: &[&Mat<f64>]) -> f64 {
    let (r, c) = (terms[0].nrows(), terms[0].ncols());
    let total = Mat::from_fn(r, c, |i, j| terms.iter().map(|t| t[(i, j)]).sum::<f64>());
    let scale: f64 = terms.iter().map(|t| fro(t.as_ref())).sum();
    if scale == 0.0 {
        0.0
    } else {
        fro(total.as_ref()) / scale
    }
}

fn rel_c(a: &Mat<c64>, b: &Mat<c64>, denom: f64) -> f64 {
    fro((a - b).as_ref()) / denom.max(f64::MIN_POSITIVE)
}

struct Context<'a> {
    p: &'a NareProblem,
    sol: &'a LowRankSolution,
    x: Mat<f64>,
    e: Mat<f64>,
    a: Mat<f64>,
    eh: Mat<f64>,
    ah: Mat<f64>,
    bh_r: Mat<f64>,
    c_r: Mat<f64>,
}

impl<'a> Context<'a> {
    fn new(p: &'a NareProblem, sol: &'a LowRankSolution) -> Result<Self> {
        if sol.v.nrows() != p.n() || sol.w.nrows() != p.nh() {
            return Err(Error::Dimension(format!(
                "solution factors have {} and {} rows for a problem with n = {}, n̂ = {}",
                sol.v.nrows(),
                sol.w.nrows(),
                p.n(),
                p.nh()
            )));
        }
        Ok(Self {
            p,
            sol,
            x: densify_solution(sol, DENSIFY_CAP)?,
            e: p.e.to_dense(),
            a: p.a.to_dense(),
            eh: p.eh.to_dense(),
            ah: p.ah.to_dense(),
            bh_r: sol.w.transpose() * &p.bh,
            c_r: &p.c * &sol.v,
        })
    }

    fn residual_identity(&self) -> Result<f64> {
        let (r, _) = dense_residual(self.p, self.x.as_ref())?;
        let diff = r - &self.sol.b_perp * &self.sol.c_perp;
        let denom = fro((&self.p.b * &self.p.ch).as_ref());
        Ok(fro(diff.as_ref()) / if denom > 0.0 { denom } else { 1.0 })
    }

    fn gains(&self) -> Result<f64> {
        let p = self.p;
        let k = p.e.mul_dense((&self.x * &p.bh).as_ref());
        let kh = p.eh.left_mul_dense((&p.c * &self.x).as_ref());
        let rel = |got: &Mat<f64>, want: &Mat<f64>| {
            let d = fro((got - want).as_ref());
            let n = fro(want.as_ref());
            if n > 0.0 {
                d / n
            } else {
                d
            }
        };
        Ok(rel(&self.sol.k_gain, &k).max(rel(&self.sol.kh_gain, &kh)))
    }

    fn projected_nare(&self, r: &ReducedModel) -> Result<f64> {
        let xb = &self.sol.xbar;
        let res = &r.a_r * xb + xb * &r.ah_r - xb * &r.bh_r * &r.c_r * xb + &r.b_r * &r.ch_r;
        let n = fro(xb.as_ref());
        Ok(fro(res.as_ref()) / if n > 0.0 { n } else { 1.0 })
    }

    fn sylvester_v(&self, d: &InterpolationData) -> Result<f64> {
        let p = self.p;
        let v = self.sol.v.as_ref();
        let av = p.a.mul_dense(v);
        let evs = -(p.e.mul_dense(v) * &d.s_v);
        let bl = &p.b * &d.l_v;
        Ok(sum_rel(&[&av, &evs, &bl]))
    }

    fn sylvester_w(&self, d: &InterpolationData) -> Result<f64> {
        let p = self.p;
        let w = self.sol.w.as_ref();
        let aw = p.ah.tr_mul_dense(w);
        let ews = -(p.eh.tr_mul_dense(w) * &d.s_w);
        let cl = p.ch.transpose() * &d.l_w;
        Ok(sum_rel(&[&aw, &ews, &cl]))
    }

    fn sylvester_x(&self, d: &InterpolationData) -> Result<f64> {
        let xi = inverse_small(self.sol.xbar.as_ref(), "X̄")?;
        let t1 = -(d.s_w.transpose() * &xi);
        let t2 = -(&xi * &d.s_v);
        let t3 = d.l_w.transpose() * &d.l_v;
        let t4 = &self.bh_r * &self.c_r;
        Ok(sum_rel(&[&t1, &t2, &t3, &t4]))
    }

    fn sylvester_vb(&self, d: &InterpolationData, r: &ReducedModel) -> Result<f64> {
        let p = self.p;
        let v = self.sol.v.as_ref();
        let av = p.a.mul_dense(v);
        let eva = -(p.e.mul_dense(v) * &r.a_r);
        let bl = &self.sol.b_perp * &d.l_v;
        Ok(sum_rel(&[&av, &eva, &bl]))
    }

    fn sylvester_wc(&self, d: &InterpolationData, r: &ReducedModel) -> Result<f64> {
        let p = self.p;
        let w = self.sol.w.as_ref();
        let aw = p.ah.tr_mul_dense(w);
        let ewa = -(p.eh.tr_mul_dense(w) * r.ah_r.transpose());
        let cl = self.sol.c_perp.transpose() * &d.l_w;
        Ok(sum_rel(&[&aw, &ewa, &cl]))
    }

    fn blocks(&self) -> Vec<(usize, usize)> {
        let m = self.p.m();
        let mut off = 0;
        self.sol
            .cases
            .iter()
            .map(|c| {
                let q = c.slots() * m;
                off += q;
                (off - q, q)
            })
            .collect()
    }

    fn block_triangular(&self, d: &InterpolationData) -> Result<f64> {
        let blocks = self.blocks();
        let mut worst: f64 = 0.0;
        for s in [&d.s_v, &d.s_w] {
            let total: usize = blocks.iter().map(|b| b.1).sum();
            if s.nrows() != total {
                return Err(Error::Dimension(format!("S is {}x{}, case blocks cover {total}", s.nrows(), s.ncols())));
            }
            let norm = max_abs(s.as_ref()).max(1.0);
            for &(start, q) in &blocks {
                for j in 0..start {
                    for i in start..start + q {
                        worst = worst.max(s[(i, j)].abs() / norm);
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Spectrum of the diagonal blocks of `S_v` (or `S_w`) against `{−α_k}` (or `{−β_k}`) with multiplicity `m`.
    fn spectrum(&self, s: MatRef<'_, f64>, v_side: bool) -> Result<f64> {
        let m = self.p.m();
        let mut computed = Vec::new();
        for (start, q) in self.blocks() {
            computed.extend(eigenvalues(s.submatrix(start, start, q, q))?);
        }
        let expected: Vec<c64> = self
            .sol
            .cases
            .iter()
            .flat_map(|c: &CaseShifts| if v_side { c.alphas() } else { c.betas() })
            .flat_map(|z| std::iter::repeat_n(-z, m))
            .collect();
        multiset_distance(&computed, &expected)
    }

    fn stabilizing(&self, r: &ReducedModel) -> Result<f64> {
        let xb = &self.sol.xbar;
        let cl = &r.a_r - xb * &r.bh_r * &r.c_r;
        let eig = eigenvalues(cl.as_ref())?;
        Ok(eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
    }

    fn interpolation(&self, r: &ReducedModel) -> Result<f64> {
        let p = self.p;
        let mut worst: f64 = 0.0;
        for z in self.sol.cases.iter().flat_map(|c| c.alphas()) {
            let s = -z;
            let Ok(g) = transfer_eval(self.e.as_ref(), self.a.as_ref(), p.b.as_ref(), p.c.as_ref(), s) else { continue };
            let gr = reduced_transfer_eval(r.a_r.as_ref(), r.b_r.as_ref(), r.c_r.as_ref(), s)?;
            worst = worst.max(rel_c(&g, &gr, fro(g.as_ref())));
        }
        Ok(worst)
    }

    fn interpolation_dual(&self, r: &ReducedModel) -> Result<f64> {
        let p = self.p;
        let mut worst: f64 = 0.0;
        for z in self.sol.cases.iter().flat_map(|c| c.betas()) {
            let s = -z.conj();
            let Ok(g) = transfer_eval(self.eh.as_ref(), self.ah.as_ref(), p.bh.as_ref(), p.ch.as_ref(), s) else { continue };
            let gr = reduced_transfer_eval(r.ah_r.as_ref(), r.bh_r.as_ref(), r.ch_r.as_ref(), s)?;
            worst = worst.max(rel_c(&g, &gr, fro(g.as_ref())));
        }
        Ok(worst)
    }

    fn error_factorization(&self, d: &InterpolationData, r: &ReducedModel) -> Result<f64> {
        let p = self.p;
        let m = p.m();
        let id: Mat<c64> = lift(Mat::<f64>::identity(m, m).as_ref());
        let mut worst: f64 = 0.0;
        for (sr, si) in SAMPLE_POINTS {
            let s = c64::new(sr, si);
            let g = transfer_eval(self.e.as_ref(), self.a.as_ref(), p.b.as_ref(), p.c.as_ref(), s)?;
            let gr = reduced_transfer_eval(r.a_r.as_ref(), r.b_r.as_ref(), r.c_r.as_ref(), s)?;
            let gp = transfer_eval(self.e.as_ref(), self.a.as_ref(), self.sol.b_perp.as_ref(), p.c.as_ref(), s)?;
            let corr = &id - reduced_transfer_eval(r.a_r.as_ref(), r.b_r.as_ref(), d.l_v.as_ref(), s)?;
            worst = worst.max(rel_c(&(&g - &gr), &(&gp * &corr), fro(g.as_ref())));

            let gh = transfer_eval(self.eh.as_ref(), self.ah.as_ref(), p.bh.as_ref(), p.ch.as_ref(), s)?;
            let ghr = reduced_transfer_eval(r.ah_r.as_ref(), r.bh_r.as_ref(), r.ch_r.as_ref(), s)?;
            let ghp = transfer_eval(self.eh.as_ref(), self.ah.as_ref(), p.bh.as_ref(), self.sol.c_perp.as_ref(), s)?;
            let lwt = d.l_w.transpose().to_owned();
            let corr_h = &id - reduced_transfer_eval(r.ah_r.as_ref(), lwt.as_ref(), r.ch_r.as_ref(), s)?;
            worst = worst.max(rel_c(&(&gh - &ghr), &(&corr_h * &ghp), fro(gh.as_ref())));
        }
        Ok(worst)
    }

    /// `G⊥(s)Ĝ⊥(s)` against `C(sE − A)⁻¹ R (sÊ − Â)⁻¹B̂` with the densely formed residual `R`,
    /// relative to `‖G(s)Ĝ(s)‖`.
    fn residual_transfer(&self) -> Result<f64> {
        let p = self.p;
        let (r, _) = dense_residual(p, self.x.as_ref())?;
        let nh = p.nh();
        let ident = Mat::<f64>::identity(nh, nh);
        let mut worst: f64 = 0.0;
        for (sr, si) in SAMPLE_POINTS {
            let s = c64::new(sr, si);
            let gp = transfer_eval(self.e.as_ref(), self.a.as_ref(), self.sol.b_perp.as_ref(), p.c.as_ref(), s)?;
            let ghp = transfer_eval(self.eh.as_ref(), self.ah.as_ref(), p.bh.as_ref(), self.sol.c_perp.as_ref(), s)?;
            let right = transfer_eval(self.eh.as_ref(), self.ah.as_ref(), p.bh.as_ref(), ident.as_ref(), s)?;
            let rr: Mat<c64> = lift(r.as_ref());
            let inner = resolvent_solve(self.e.as_ref(), self.a.as_ref(), (&rr * &right).as_ref(), s)?;
            let cc: Mat<c64> = lift(p.c.as_ref());
            let full = &cc * &inner;
            let g = transfer_eval(self.e.as_ref(), self.a.as_ref(), p.b.as_ref(), p.c.as_ref(), s)?;
            let gh = transfer_eval(self.eh.as_ref(), self.ah.as_ref(), p.bh.as_ref(), p.ch.as_ref(), s)?;
            worst = worst.max(rel_c(&(&gp * &ghp), &full, fro((&g * &gh).as_ref())));
        }
        Ok(worst)
    }
}
