//! Run both solvers on the same shift list: the SMW-free variant reproduces N-RADI to rounding.

use nare_adi::linalg::dense::norm2;
use nare_adi::{densify_solution, gen_heat, nradi_solve, unradi_solve, ShiftPlan, SolverConfig};

fn main() -> nare_adi::Result<()> {
    let p = gen_heat(20, 16, 2, 2, 3)?;
    let cfg = SolverConfig::default();
    let (sn, rn) = nradi_solve(&p, &cfg, &ShiftPlan::Auto)?;
    let (su, ru, lyap) = unradi_solve(&p, &cfg, &ShiftPlan::User(sn.shifts_used.clone()))?;

    let cases: Vec<&str> = sn.cases.iter().map(|c| c.case().label()).collect();
    println!("shift cases: {}", cases.join(" "));
    for (k, (a, b)) in rn.residuals().iter().zip(ru.residuals()).enumerate() {
        println!("step {k:>2}: nradi {a:.6e}  unradi {b:.6e}");
    }
    let (xn, xu) = (densify_solution(&sn, 1 << 20)?, densify_solution(&su, 1 << 20)?);
    println!("‖X̃_u − X̃_n‖₂/‖X̃_n‖₂ = {:.2e}", norm2((&xu - &xn).as_ref()) / norm2(xn.as_ref()));

    // V = V_lyap T_v with block upper-triangular T_v
    let v = &lyap.v_lyap * &lyap.t_v;
    println!("‖V_lyap T_v − V‖₂ = {:.2e}", norm2((&v - &su.v).as_ref()));
    println!("T_v is {}x{}, CF-ADI basis has {} columns", lyap.t_v.nrows(), lyap.t_v.ncols(), lyap.v_lyap.ncols());
    Ok(())
}
