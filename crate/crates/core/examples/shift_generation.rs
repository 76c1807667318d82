//! Dominant-pole scoring and the shifts the automatic generator picks.

use nare_adi::shifts::{dominant_pole, next_shift_pair, Side};
use nare_adi::{gen_heat, nradi_solve, Mat, ShiftOrigin, ShiftPlan, SolverConfig};

fn main() -> nare_adi::Result<()> {
    // diagonal pencil: poles −1, −2, −10 with input weights 1, 3, 1
    let a = Mat::from_fn(3, 3, |i, j| if i == j { [-1.0, -2.0, -10.0][i] } else { 0.0 });
    let e = Mat::<f64>::identity(3, 3);
    let r = Mat::from_fn(3, 1, |i, _| [1.0, 3.0, 1.0][i]);
    let best = dominant_pole(e.as_ref(), a.as_ref(), r.as_ref(), Side::V)?;
    println!("dominant pole {} (score {:.2}), next shifts {:?}", best.lambda, best.score, next_shift_pair(&best));

    let p = gen_heat(40, 30, 2, 2, 7)?;
    let (sol, _) = nradi_solve(&p, &SolverConfig::default(), &ShiftPlan::Auto)?;
    let s = &sol.shifts_used;
    for k in 0..s.len() {
        let origin = match s.origin[k] {
            ShiftOrigin::Auto => "auto",
            ShiftOrigin::User => "user",
        };
        println!("slot {k:>2}: alpha {:>22.6} beta {:>22.6} ({origin})", s.alpha[k], s.beta[k]);
    }
    Ok(())
}
