//! Solve a generated heat-equation NARE with automatic shifts and compare against the dense solution.
//!
//! `cargo run --release --example heat_nradi -- 60 45`

use nare_adi::oracle::dense_nare_solve;
use nare_adi::{densify_solution, gen_heat, nradi_solve, ShiftPlan, SolverConfig};

fn main() -> nare_adi::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("sizes must be integers"));
    let n = args.next().unwrap_or(40);
    let nh = args.next().unwrap_or(30);
    let p = gen_heat(n, nh, 2, 2, 7)?;

    let cfg = SolverConfig::default();
    let (sol, record) = nradi_solve(&p, &cfg, &ShiftPlan::Auto)?;
    println!("{:>4} {:>5} {:>24} {:>24} {:>11}", "iter", "case", "alpha", "beta", "residual");
    for r in &record.rows {
        let case = r.case.map_or("init", |c| c.label());
        println!("{:>4} {case:>5} {:>24.6} {:>24.6} {:>11.3e}", r.iter, r.alpha, r.beta, r.residual);
    }
    println!("converged: {}, rank {}, {} slots", sol.converged, sol.rank(), sol.slots());

    if n + nh <= 512 {
        let x = densify_solution(&sol, n * nh)?;
        let oracle = dense_nare_solve(&p)?;
        let err = (&x - &oracle.x).norm_l2() / oracle.x.norm_l2();
        println!("relative Frobenius distance to the dense solution: {err:.3e}");
    }
    Ok(())
}
