mod common;

use common::{mat, mixed_cases, rel, shifts, unit_scalar};
use nare_adi::linalg::dense::{fro, inverse_small, lift, norm2};
use nare_adi::linalg::{shifted_factorize, solve_factored, spectral_norm_product};
use nare_adi::nradi::record::CSV_HEADER;
use nare_adi::nradi::{classify_case, compute_x, smw_solve, NradiState};
use nare_adi::oracle::{dense_residual, kron_sylvester_solve};
use nare_adi::problem::SplitMix64;
use nare_adi::{
    c64, densify_solution, gen_heat, nradi_solve, Case, CaseShifts, DenseBlock, Error, LowRankSolution, Mat, ShiftPlan,
    ShiftSequence, SolverConfig,
};
use proptest::prelude::*;

/// `x = Y⁻¹` with `s_wᵀY + Y s_v = l_wᵀl_v + wᵀB̂Cv`.
fn x_oracle(cs: &CaseShifts, g: &Mat<f64>, m: usize) -> Mat<f64> {
    let sb = cs.small_blocks(m);
    let rhs = sb.l_w.transpose() * &sb.l_v + g;
    let y = kron_sylvester_solve(sb.s_w.as_ref(), sb.s_v.as_ref(), rhs.as_ref()).unwrap();
    inverse_small(y.as_ref(), "Y").unwrap()
}

fn zero_x(cs: CaseShifts) -> Mat<f64> {
    let q = cs.slots();
    compute_x(&cs, Mat::zeros(q, 1).as_ref(), Mat::zeros(1, q).as_ref(), 1).unwrap()
}

#[test]
fn case_classification() {
    let s = shifts(&[(-1.0, 0.0, -2.0, 0.0)]);
    assert_eq!(classify_case(&s, 0).unwrap(), CaseShifts::I { alpha: -1.0, beta: -2.0 });
    let s = shifts(&[(-1.0, 1.0, -2.0, 3.0), (-1.0, -1.0, -2.0, -3.0)]);
    assert_eq!(classify_case(&s, 0).unwrap().case(), Case::II);
    let s = shifts(&[(-1.0, 1.0, -2.0, 0.0), (-1.0, -1.0, -3.0, 0.0)]);
    assert_eq!(classify_case(&s, 0).unwrap(), CaseShifts::III { alpha: c64::new(-1.0, 1.0), beta: -2.0, beta2: -3.0 });
    let s = shifts(&[(-1.0, 0.0, -2.0, 1.0), (-4.0, 0.0, -2.0, -1.0)]);
    assert_eq!(classify_case(&s, 0).unwrap(), CaseShifts::IV { alpha: -1.0, alpha2: -4.0, beta: c64::new(-2.0, 1.0) });

    let s = shifts(&[(-3.0, 0.0, -3.0, 0.0), (-1.0, 1.0, -1.0, 0.0)]);
    assert!(matches!(classify_case(&s, 1).unwrap_err(), Error::ShiftOrdering(_)));
    let s = shifts(&[(-1.0, 1.0, -1.0, 1.0), (-1.0, 1.0, -1.0, -1.0)]);
    assert!(matches!(classify_case(&s, 0).unwrap_err(), Error::ShiftOrdering(_)));
    assert_eq!(mixed_cases().cases().unwrap().iter().map(|c| c.case()).collect::<Vec<_>>(), [
        Case::III,
        Case::IV,
        Case::II,
        Case::I,
        Case::I
    ]);
}

#[test]
fn smw_degenerate_couplings() {
    let mut rng = SplitMix64::new(2);
    let p = gen_heat(6, 5, 2, 2, 2).unwrap();
    let f = shifted_factorize(&p.a, &p.e, c64::new(-3.0, 1.0)).unwrap();
    let rhs = DenseBlock::Real(rng.fill(6, 2, 1.0));
    let base = solve_factored(&f, &rhs).unwrap().to_complex();
    let k = rng.fill(6, 2, 1.0);
    let c = rng.fill(2, 6, 1.0);
    let zero_k = smw_solve(&f, Mat::zeros(6, 2).as_ref(), c.as_ref(), &rhs).unwrap().to_complex();
    let zero_c = smw_solve(&f, k.as_ref(), Mat::zeros(2, 6).as_ref(), &rhs).unwrap().to_complex();
    assert!(fro((&zero_k - &base).as_ref()) <= 1e-14 * fro(base.as_ref()));
    assert!(fro((&zero_c - &base).as_ref()) <= 1e-14 * fro(base.as_ref()));
}

#[test]
fn smw_matches_dense_feedback_solve() {
    let mut rng = SplitMix64::new(6);
    let p = gen_heat(6, 5, 2, 2, 6).unwrap();
    let k = rng.fill(6, 2, 1.0);
    let c = rng.fill(2, 6, 1.0);
    let rhs = rng.fill(6, 2, 1.0);
    for alpha in [c64::new(-2.0, 0.0), c64::new(-2.0, 5.0)] {
        let f = shifted_factorize(&p.a, &p.e, alpha).unwrap();
        let y = smw_solve(&f, k.as_ref(), c.as_ref(), &DenseBlock::Real(rhs.clone())).unwrap().to_complex();
        let dense: Mat<c64> = lift::<c64>((p.a.to_dense() - &k * &c).as_ref())
            + Mat::from_fn(6, 6, |i, j| p.e.to_dense()[(i, j)] * alpha);
        let r = &dense * &y - lift::<c64>(rhs.as_ref());
        assert!(fro(r.as_ref()) <= 1e-12 * fro(rhs.as_ref()) * norm2(dense.as_ref()));
    }
}

#[test]
fn x_block_fixed_vectors() {
    let x = zero_x(CaseShifts::I { alpha: -1.0, beta: -1.0 });
    assert!((x[(0, 0)] - 2.0).abs() < 1e-15);
    let x = compute_x(&CaseShifts::I { alpha: -1.0, beta: -2.0 }, mat(&[&[0.5]]).as_ref(), mat(&[&[1.0]]).as_ref(), 1).unwrap();
    assert!((x[(0, 0)] - 2.0).abs() < 1e-15);

    let cases = [
        (CaseShifts::II { alpha: c64::new(-1.0, 1.0), beta: c64::new(-1.0, 2.0) }, mat(&[&[4.0, -0.5], &[-7.0, 9.0]])),
        (CaseShifts::III { alpha: c64::new(-1.0, 1.0), beta: -1.0, beta2: -2.0 }, mat(&[&[5.0, 10.0], &[-5.0, -20.0]])),
        (CaseShifts::IV { alpha: -1.0, alpha2: -2.0, beta: c64::new(-1.0, 1.0) }, mat(&[&[5.0, -5.0], &[10.0, -20.0]])),
    ];
    for (cs, expected) in cases {
        let x = zero_x(cs);
        assert!(fro((&x - &expected).as_ref()) <= 1e-12 * fro(expected.as_ref()), "{cs:?}: {x:?}");
        let o = x_oracle(&cs, &Mat::zeros(2, 2), 1);
        assert!(fro((&o - &expected).as_ref()) <= 1e-12 * fro(expected.as_ref()));
    }
}

#[test]
fn x_block_rejects_colliding_spectra() {
    let cs = CaseShifts::I { alpha: -1.0, beta: -1.0 };
    let err = compute_x(&cs, mat(&[&[-1.0]]).as_ref(), mat(&[&[1.0]]).as_ref(), 1).unwrap_err();
    assert!(matches!(err, Error::Numerical(_)), "{err}");
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn scalar_step_is_exact() {
    let p = unit_scalar();
    let mut st = NradiState::new(&p).unwrap();
    assert_eq!(st.relative_residual().unwrap(), 1.0);
    st.step(&CaseShifts::I { alpha: -2.0, beta: -2.0 }).unwrap();
    let f = &st.factors;
    assert!((f.v[(0, 0)] + 1.0 / 3.0).abs() < 1e-15);
    assert!((f.w[(0, 0)] + 1.0).abs() < 1e-15);
    assert!((f.xbar()[(0, 0)] - 3.0).abs() < 1e-14);
    assert!(f.b_perp[(0, 0)].abs() < 1e-15 && f.c_perp[(0, 0)].abs() < 1e-15);
    assert!(st.relative_residual().unwrap() < 1e-15);

    let before = f.v[(0, 0)] * f.xbar()[(0, 0)] * f.w[(0, 0)];
    st.step(&CaseShifts::I { alpha: -1.0, beta: -1.0 }).unwrap();
    let f = &st.factors;
    assert_eq!(f.v[(0, 1)], 0.0);
    let xbar = f.xbar();
    let after: f64 = (0..2).map(|k| f.v[(0, k)] * xbar[(k, k)] * f.w[(0, k)]).sum();
    assert_eq!(after, before);
    assert_eq!(st.relative_residual().unwrap(), 0.0);
}

#[test]
fn scalar_solve_with_user_shift() {
    let p = unit_scalar();
    let (sol, rec) = nradi_solve(&p, &SolverConfig::default(), &ShiftPlan::User(shifts(&[(-2.0, 0.0, -2.0, 0.0)]))).unwrap();
    assert!(sol.converged);
    assert_eq!(sol.slots(), 1);
    let x = densify_solution(&sol, 1).unwrap();
    assert!((x[(0, 0)] - 1.0).abs() < 1e-14);
    assert_eq!(rec.rows.len(), 2);
    assert!(rec.rows[1].residual < 1e-14);
}

#[test]
fn every_case_keeps_the_residual_identity() {
    let p = gen_heat(4, 3, 1, 1, 2).unwrap();
    let denom = spectral_norm_product(p.b.as_ref(), p.ch.as_ref()).unwrap();
    let mut st = NradiState::new(&p).unwrap();
    for cs in mixed_cases().cases().unwrap() {
        st.step(&cs).unwrap();
        let f = &st.factors;
        let x = &f.v * f.xbar() * f.w.transpose();
        let (r, rn) = dense_residual(&p, x.as_ref()).unwrap();
        assert!(fro((&r - &f.b_perp * &f.c_perp).as_ref()) <= 1e-10, "{cs:?}");
        assert!((st.relative_residual().unwrap() - rn / denom).abs() <= 1e-10);
        let gain = p.e.mul_dense((&x * &p.bh).as_ref());
        assert!(fro((&gain - &f.k_gain).as_ref()) <= 1e-12 * fro(gain.as_ref()).max(1.0));
    }
}

#[test]
fn stopping_rules() {
    let p = gen_heat(12, 10, 2, 2, 4).unwrap();
    let cfg = SolverConfig { kmax: 3, ..SolverConfig::default() };
    let (sol, rec) = nradi_solve(&p, &cfg, &ShiftPlan::Auto).unwrap();
    assert!(!sol.converged);
    assert!(sol.slots() <= 3);
    assert_eq!(sol.final_residual, rec.last_residual().unwrap());

    let (sol, _) = nradi_solve(&p, &SolverConfig::default(), &ShiftPlan::User(shifts(&[(-5.0, 0.0, -5.0, 0.0)]))).unwrap();
    assert!(!sol.converged);
    assert_eq!(sol.slots(), 1);

    let bad = ShiftPlan::User(shifts(&[(1.0, 0.0, -1.0, 0.0)]));
    let err = nradi_solve(&p, &SolverConfig::default(), &bad).unwrap_err();
    assert!(matches!(err, Error::ShiftRejected(_)));
    assert_eq!(err.exit_code(), 4);

    let unpaired = ShiftPlan::User(shifts(&[(-1.0, 1.0, -1.0, 1.0)]));
    assert!(matches!(nradi_solve(&p, &SolverConfig::default(), &unpaired).unwrap_err(), Error::ShiftOrdering(_)));

    let cfg = SolverConfig { initial_shift: c64::new(0.5, 0.0), ..SolverConfig::default() };
    assert!(matches!(nradi_solve(&p, &cfg, &ShiftPlan::Auto).unwrap_err(), Error::ShiftRejected(_)));
}

#[test]
fn convergence_record_csv() {
    let p = gen_heat(8, 6, 1, 1, 1).unwrap();
    let (sol, rec) = nradi_solve(&p, &SolverConfig::default(), &ShiftPlan::User(mixed_cases())).unwrap();
    let mut buf = Vec::new();
    rec.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert!(lines.next().unwrap().starts_with("0,init,"));
    assert_eq!(rec.rows.len(), sol.cases.len() + 1);
    assert_eq!(rec.rows.last().unwrap().iter, sol.slots());
    assert_eq!(rec.rows[1].case, Some(Case::III));
}

#[test]
fn densify_examples() {
    let s = LowRankSolution {
        v: mat(&[&[-1.0 / 3.0]]),
        xbar: mat(&[&[3.0]]),
        w: mat(&[&[-1.0]]),
        k_gain: Mat::zeros(1, 1),
        kh_gain: Mat::zeros(1, 1),
        b_perp: Mat::zeros(1, 1),
        c_perp: Mat::zeros(1, 1),
        bh_r: Mat::zeros(1, 1),
        c_r: Mat::zeros(1, 1),
        shifts_used: ShiftSequence::new(),
        cases: vec![],
        converged: true,
        final_residual: 0.0,
        interp: None,
    };
    assert!((densify_solution(&s, 1).unwrap()[(0, 0)] - 1.0).abs() < 1e-15);
    let empty = LowRankSolution { v: Mat::zeros(3, 0), xbar: Mat::zeros(0, 0), w: Mat::zeros(2, 0), ..s.clone() };
    assert_eq!(densify_solution(&empty, 6).unwrap(), Mat::<f64>::zeros(3, 2));
    assert!(matches!(densify_solution(&empty, 5).unwrap_err(), Error::CapExceeded(_)));
}

#[test]
fn zero_right_hand_side_returns_zero_solution() {
    let mut p = gen_heat(6, 5, 1, 1, 3).unwrap();
    p.b = Mat::zeros(6, 1);
    let (sol, _) = nradi_solve(&p, &SolverConfig::default(), &ShiftPlan::Auto).unwrap();
    assert!(sol.converged);
    assert_eq!(sol.rank(), 0);
    assert_eq!(sol.final_residual, 0.0);
}

fn random_case(rng: &mut SplitMix64, case: usize) -> CaseShifts {
    let mut re = || -(0.1 + 4.9 * rng.next_f64());
    let (a, b, a2) = (re(), re(), re());
    let mut im = || 0.1 + 4.9 * rng.next_f64();
    let (ai, bi) = (im(), im());
    match case {
        0 => CaseShifts::I { alpha: a, beta: b },
        1 => CaseShifts::II { alpha: c64::new(a, ai), beta: c64::new(b, bi) },
        2 => CaseShifts::III { alpha: c64::new(a, ai), beta: b, beta2: a2 },
        _ => CaseShifts::IV { alpha: a, alpha2: a2, beta: c64::new(b, bi) },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn x_block_matches_kronecker_oracle(seed in any::<u64>(), case in 0usize..4, m in 1usize..3) {
        let mut rng = SplitMix64::new(seed);
        let cs = random_case(&mut rng, case);
        let q = cs.slots() * m;
        let wt_bh = rng.fill(q, 2, 0.3);
        let cv = rng.fill(2, q, 0.3);
        let x = compute_x(&cs, wt_bh.as_ref(), cv.as_ref(), m).unwrap();
        let o = x_oracle(&cs, &(&wt_bh * &cv), m);
        prop_assert!(rel(&x, &o) <= 1e-10);
    }

    #[test]
    fn scalar_step_keeps_residual_identity(alpha in -10.0f64..-0.1, beta in -10.0f64..-0.1) {
        let p = unit_scalar();
        let mut st = NradiState::new(&p).unwrap();
        st.step(&CaseShifts::I { alpha, beta }).unwrap();
        let f = &st.factors;
        let x = f.v[(0, 0)] * f.xbar()[(0, 0)] * f.w[(0, 0)];
        let r = -x - x - x * x + 3.0;
        prop_assert!((r - f.b_perp[(0, 0)] * f.c_perp[(0, 0)]).abs() <= 1e-12 * 3.0);
    }
}
