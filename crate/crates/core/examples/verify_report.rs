//! Print every verification check for a solve, including the dense-oracle ones.

use nare_adi::oracle::{dense_nare_solve, verify_report_with_oracle};
use nare_adi::{gen_heat, nradi_solve, ShiftPlan, SolverConfig};

fn main() -> nare_adi::Result<()> {
    let seed = std::env::args().nth(1).map_or(1, |s| s.parse().expect("seed must be an integer"));
    let p = gen_heat(16, 12, 2, 2, seed)?;
    let cfg = SolverConfig { emit_interp: true, ..SolverConfig::default() };
    let (sol, _) = nradi_solve(&p, &cfg, &ShiftPlan::Auto)?;
    let oracle = dense_nare_solve(&p)?;
    let report = verify_report_with_oracle(&p, &sol, sol.interp.as_ref(), &oracle);
    for c in &report.checks {
        let value = c.value.map_or("-".to_string(), |v| format!("{v:.3e}"));
        println!("{:<22} {value:>10}  ≤ {:<8.0e} {:?}", c.name, c.threshold, c.status);
    }
    println!("overall: {:?}", report.overall);
    Ok(())
}
