//! The scalar equation `−x − x − x² + 3 = 0`: one real shift at −2 lands on the stabilizing root x = 1.

use nare_adi::oracle::dense_nare_solve;
use nare_adi::problem::ProblemMetadata;
use nare_adi::{densify_solution, nradi_solve, Mat, NareProblem, ShiftOrigin, ShiftPlan, ShiftSequence, SolverConfig, SparseMatrix};

fn scalar(v: f64) -> Mat<f64> {
    Mat::from_fn(1, 1, |_, _| v)
}

fn main() -> nare_adi::Result<()> {
    let one = SparseMatrix::from_dense(scalar(1.0).as_ref())?;
    let minus_one = SparseMatrix::from_dense(scalar(-1.0).as_ref())?;
    let p = NareProblem {
        e: one.clone(),
        a: minus_one.clone(),
        b: scalar(1.0),
        c: scalar(1.0),
        eh: one,
        ah: minus_one,
        bh: scalar(1.0),
        ch: scalar(3.0),
        meta: ProblemMetadata::default(),
    };

    let plan = ShiftPlan::User(ShiftSequence::symmetric(&[nare_adi::c64::new(-2.0, 0.0)], ShiftOrigin::User));
    let (sol, record) = nradi_solve(&p, &SolverConfig::default(), &plan)?;
    let x = densify_solution(&sol, 1)?;
    println!("N-RADI: x = {} after {} slot(s), residual {:e}", x[(0, 0)], sol.slots(), sol.final_residual);
    println!("factors: V = {}, X̄ = {}, W = {}", sol.v[(0, 0)], sol.xbar[(0, 0)], sol.w[(0, 0)]);
    println!("residual history: {:?}", record.residuals());

    let oracle = dense_nare_solve(&p)?;
    println!("oracle: x = {}, closed loop {:?}", oracle.x[(0, 0)], oracle.closed_loop);
    Ok(())
}
