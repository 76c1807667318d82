//! Lyapunov and Sylvester equations are NAREs with a zero quadratic term.

use nare_adi::linalg::dense::norm2;
use nare_adi::oracle::{dense_residual, kron_generalized_sylvester};
use nare_adi::{densify_solution, embed_lyapunov, embed_sylvester, gen_heat, nradi_solve, unradi_solve, ShiftPlan, SolverConfig};

fn main() -> nare_adi::Result<()> {
    let cfg = SolverConfig::default();

    let g = gen_heat(30, 30, 2, 2, 11)?;
    let lyap = embed_lyapunov(&g.a, &g.e, g.b.as_ref());
    let (sol, _, factors) = unradi_solve(&lyap, &cfg, &ShiftPlan::Auto)?;
    let x = densify_solution(&sol, 1 << 20)?;
    let (_, res) = dense_residual(&lyap, x.as_ref())?;
    println!("Lyapunov: {} slots, residual / ‖BBᵀ‖ = {:.2e}", sol.slots(), res / norm2((&g.b * g.b.transpose()).as_ref()));
    println!("  asymmetry ‖X − Xᵀ‖/‖X‖ = {:.2e}", norm2((&x - x.transpose()).as_ref()) / norm2(x.as_ref()));
    println!("  CF-ADI factor width {}", factors.v_lyap.ncols());

    let h = gen_heat(30, 24, 2, 2, 12)?;
    let sylv = embed_sylvester(&h.a, &h.e, &h.ah, &h.eh, h.b.as_ref(), h.ch.as_ref());
    let (sol, _) = nradi_solve(&sylv, &cfg, &ShiftPlan::Auto)?;
    let x = densify_solution(&sol, 1 << 20)?;
    let reference = kron_generalized_sylvester(
        h.a.to_dense().as_ref(),
        h.e.to_dense().as_ref(),
        h.ah.to_dense().as_ref(),
        h.eh.to_dense().as_ref(),
        (-(&h.b * &h.ch)).as_ref(),
    )?;
    println!(
        "Sylvester: {} slots, distance to the Kronecker solution {:.2e}",
        sol.slots(),
        norm2((&x - &reference).as_ref()) / norm2(reference.as_ref())
    );
    Ok(())
}
