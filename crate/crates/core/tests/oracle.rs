mod common;

use common::{mat, rel, scalar_problem, unit_scalar};
use nare_adi::linalg::dense::{fro, norm2};
use nare_adi::oracle::{
    dense_nare_solve, dense_residual, kron_generalized_sylvester, kron_sylvester_solve, multiset_distance,
    reduced_transfer_eval, spectral_identity, transfer_eval, verify_report, verify_report_with_oracle, CheckStatus,
    CompositeSpectralMatrix, Overall,
};
use nare_adi::problem::SplitMix64;
use nare_adi::{c64, densify_solution, gen_heat, nradi_solve, Error, Mat, ShiftPlan, SolverConfig};
use proptest::prelude::*;

#[test]
fn scalar_stabilizing_root() {
    let p = unit_scalar();
    let s = dense_nare_solve(&p).unwrap();
    assert!((s.x[(0, 0)] - 1.0).abs() < 1e-14);
    assert!((s.closed_loop[0].re + 2.0).abs() < 1e-14);
    assert!((s.dual_closed_loop[0].re + 2.0).abs() < 1e-14);

    let k = CompositeSpectralMatrix::new(&p).unwrap();
    assert_eq!(k.k, mat(&[&[-1.0, 3.0], &[1.0, 1.0]]));
    let mut ev: Vec<f64> = k.eigenvalues().unwrap().iter().map(|z| z.re).collect();
    ev.sort_by(f64::total_cmp);
    assert!((ev[0] + 2.0).abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
    assert!(spectral_identity(&p, s.x.as_ref()).unwrap() < 1e-14);
}

#[test]
fn dense_solution_residual() {
    let p = gen_heat(10, 8, 2, 2, 5).unwrap();
    let s = dense_nare_solve(&p).unwrap();
    let bc = norm2((&p.b * &p.ch).as_ref());
    assert!(s.residual_norm <= 1e-10 * bc);
    let (_, r) = dense_residual(&p, s.x.as_ref()).unwrap();
    assert!(r <= 1e-10 * bc);
    assert!(s.closed_loop.iter().chain(&s.dual_closed_loop).all(|z| z.re < 0.0));
    assert!(spectral_identity(&p, s.x.as_ref()).unwrap() <= 1e-8);
}

#[test]
fn zero_x_residual_is_the_constant_term() {
    let p = gen_heat(6, 5, 2, 2, 1).unwrap();
    let (r, n) = dense_residual(&p, Mat::zeros(6, 5).as_ref()).unwrap();
    let bc = &p.b * &p.ch;
    assert_eq!(fro((&r - &bc).as_ref()), 0.0);
    assert!((n - norm2(bc.as_ref())).abs() < 1e-15);
    assert!(matches!(dense_residual(&p, Mat::zeros(5, 5).as_ref()).unwrap_err(), Error::Dimension(_)));
}

#[test]
fn oracle_failure_modes() {
    // unstable a: the only invariant-subspace candidate leaves A_cl = 1
    let err = dense_nare_solve(&scalar_problem(1.0, 1.0, 1.0, 1.0, 0.0, 0.0)).unwrap_err();
    assert!(matches!(err, Error::NoStabilizingSolution(_)), "{err}");
    let err = dense_nare_solve(&scalar_problem(0.0, 0.0, 1.0, 1.0, 0.0, 0.0)).unwrap_err();
    assert!(matches!(err, Error::NoStabilizingSolution(_)), "{err}");
    let err = dense_nare_solve(&gen_heat(300, 260, 1, 1, 0).unwrap()).unwrap_err();
    assert!(matches!(err, Error::CapExceeded(_)));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn kronecker_examples() {
    let y = kron_sylvester_solve(mat(&[&[1.0]]).as_ref(), mat(&[&[2.0]]).as_ref(), mat(&[&[3.0]]).as_ref()).unwrap();
    assert!((y[(0, 0)] - 1.0).abs() < 1e-15);

    let s1t = mat(&[&[1.0, 2.0], &[-2.0, 1.0]]);
    let s2 = mat(&[&[1.0, -1.0], &[1.0, 1.0]]);
    let m = mat(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let y = kron_sylvester_solve(s1t.transpose(), s2.as_ref(), m.as_ref()).unwrap();
    let expected = &mat(&[&[18.0, 1.0], &[14.0, 8.0]]) * (1.0 / 65.0);
    assert!(fro((&y - &expected).as_ref()) < 1e-15);

    let y = kron_sylvester_solve(s1t.transpose(), s2.as_ref(), Mat::zeros(2, 2).as_ref()).unwrap();
    assert_eq!(y, Mat::<f64>::zeros(2, 2));

    let err = kron_sylvester_solve(mat(&[&[1.0]]).as_ref(), mat(&[&[-1.0]]).as_ref(), mat(&[&[1.0]]).as_ref()).unwrap_err();
    assert!(matches!(err, Error::SpectraCollision(_)));

    let big = Mat::<f64>::identity(65, 65);
    let err = kron_sylvester_solve(big.as_ref(), big.as_ref(), Mat::zeros(65, 65).as_ref()).unwrap_err();
    assert!(matches!(err, Error::CapExceeded(_)));
}

#[test]
fn transfer_function_examples() {
    let one = mat(&[&[1.0]]);
    let a = mat(&[&[-1.0]]);
    let g0 = transfer_eval(one.as_ref(), a.as_ref(), one.as_ref(), one.as_ref(), c64::new(0.0, 0.0)).unwrap();
    assert!((g0[(0, 0)] - c64::new(1.0, 0.0)).norm() < 1e-15);
    let g1 = transfer_eval(one.as_ref(), a.as_ref(), one.as_ref(), one.as_ref(), c64::new(1.0, 0.0)).unwrap();
    assert!((g1[(0, 0)] - c64::new(0.5, 0.0)).norm() < 1e-15);
    let gr = reduced_transfer_eval(a.as_ref(), one.as_ref(), one.as_ref(), c64::new(1.0, 0.0)).unwrap();
    assert!((gr[(0, 0)] - c64::new(0.5, 0.0)).norm() < 1e-15);
    let err = transfer_eval(one.as_ref(), a.as_ref(), one.as_ref(), one.as_ref(), c64::new(-1.0, 0.0)).unwrap_err();
    assert!(matches!(err, Error::Singular(_)), "{err}");
}

#[test]
fn multiset_matching() {
    let a = [c64::new(-1.0, 0.0), c64::new(-2.0, 1.0), c64::new(-2.0, -1.0)];
    let b = [c64::new(-2.0, -1.0), c64::new(-1.0, 0.0), c64::new(-2.0, 1.0)];
    assert_eq!(multiset_distance(&a, &b).unwrap(), 0.0);
    let c = [c64::new(-1.0, 0.0), c64::new(-1.0, 0.0), c64::new(-2.0, 1.0)];
    assert!(multiset_distance(&a, &c).unwrap() > 0.1);
    assert!(multiset_distance(&a, &b[..2]).is_err());
}

#[test]
fn full_report_passes_and_tampering_fails() {
    let p = gen_heat(16, 12, 2, 2, 9).unwrap();
    let cfg = SolverConfig { emit_interp: true, ..SolverConfig::default() };
    let (sol, _) = nradi_solve(&p, &cfg, &ShiftPlan::Auto).unwrap();
    assert!(sol.converged);
    let oracle = dense_nare_solve(&p).unwrap();
    let report = verify_report_with_oracle(&p, &sol, sol.interp.as_ref(), &oracle);
    for c in &report.checks {
        assert!(c.pass, "{} failed: {:?} (threshold {:e})", c.name, c.value, c.threshold);
        assert_eq!(c.status, CheckStatus::Pass);
    }
    assert_eq!(report.overall, Overall::Pass);
    assert!(report.get("oracle-agreement").unwrap().value.unwrap() <= 1e-6);
    let x = densify_solution(&sol, 1 << 20).unwrap();
    assert!(rel(&x, &oracle.x) <= 1e-6);

    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["overall"], "pass");
    assert!(json["checks"].as_array().unwrap().iter().all(|c| c["threshold"].is_number() && c["name"].is_string()));

    let mut tampered = sol.clone();
    tampered.xbar = &sol.xbar * 2.0;
    let r = verify_report(&p, &tampered, sol.interp.as_ref());
    assert!(!r.get("projected-nare").unwrap().pass);
    assert_eq!(r.overall, Overall::Fail);
    assert!(!r.passed());
}

#[test]
fn report_without_interpolation_data_skips_projected_checks() {
    let p = gen_heat(10, 8, 1, 1, 2).unwrap();
    let (sol, _) = nradi_solve(&p, &SolverConfig::default(), &ShiftPlan::Auto).unwrap();
    let r = verify_report(&p, &sol, None);
    assert!(r.passed());
    assert_eq!(r.get("residual-identity").unwrap().status, CheckStatus::Pass);
    assert_eq!(r.get("sylvester-v").unwrap().status, CheckStatus::Skipped);
}

#[test]
fn empty_solution_skips_everything() {
    let mut p = gen_heat(6, 5, 1, 1, 3).unwrap();
    p.b = Mat::zeros(6, 1);
    let (sol, _) = nradi_solve(&p, &SolverConfig::default(), &ShiftPlan::Auto).unwrap();
    let r = verify_report(&p, &sol, None);
    assert!(r.checks.iter().all(|c| c.status == CheckStatus::Skipped && c.value.is_none()));
    assert!(r.passed());
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert!(json["checks"][0]["value"].is_null());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kron_solution_satisfies_the_equation(seed in any::<u64>(), k in 1usize..6, j in 1usize..6) {
        let mut rng = SplitMix64::new(seed);
        let shift = |n: usize, rng: &mut SplitMix64| &Mat::<f64>::identity(n, n) * 3.0 + rng.fill(n, n, 0.5);
        let (s1, s2) = (shift(k, &mut rng), shift(j, &mut rng));
        let m = rng.fill(k, j, 1.0);
        let y = kron_sylvester_solve(s1.as_ref(), s2.as_ref(), m.as_ref()).unwrap();
        let r = s1.transpose() * &y + &y * &s2 - &m;
        prop_assert!(fro(r.as_ref()) <= 1e-12 * fro(m.as_ref()) * (1.0 + fro(s1.as_ref()) + fro(s2.as_ref())));
    }

    #[test]
    fn generalized_sylvester_satisfies_the_equation(seed in any::<u64>(), n in 2usize..8, nh in 2usize..8) {
        let p = gen_heat(n, nh, 1, 1, seed).unwrap();
        let (a, e, ah, eh) = (p.a.to_dense(), p.e.to_dense(), p.ah.to_dense(), p.eh.to_dense());
        let m = &p.b * &p.ch;
        let x = kron_generalized_sylvester(a.as_ref(), e.as_ref(), ah.as_ref(), eh.as_ref(), m.as_ref()).unwrap();
        let r = &a * &x * &eh + &e * &x * &ah - &m;
        prop_assert!(fro(r.as_ref()) <= 1e-10 * fro(m.as_ref()).max(1e-300) * (1.0 + norm2(a.as_ref()) * fro(x.as_ref()) / fro(m.as_ref()).max(1e-300)));
    }
}
