//! The small diagonal block of X̄ for each shift case, next to the Kronecker reference.

use nare_adi::linalg::dense::inverse_small;
use nare_adi::nradi::compute_x;
use nare_adi::oracle::kron_sylvester_solve;
use nare_adi::{c64, CaseShifts, Mat};

fn main() -> nare_adi::Result<()> {
    let cases = [
        CaseShifts::I { alpha: -1.0, beta: -2.0 },
        CaseShifts::II { alpha: c64::new(-1.0, 1.0), beta: c64::new(-1.0, 2.0) },
        CaseShifts::III { alpha: c64::new(-1.0, 1.0), beta: -1.0, beta2: -2.0 },
        CaseShifts::IV { alpha: -1.0, alpha2: -2.0, beta: c64::new(-1.0, 1.0) },
    ];
    for cs in cases {
        let q = cs.slots();
        // zero coupling WᵀB̂ and CV
        let x = compute_x(&cs, Mat::zeros(q, 1).as_ref(), Mat::zeros(1, q).as_ref(), 1)?;
        let sb = cs.small_blocks(1);
        let y = kron_sylvester_solve(sb.s_w.as_ref(), sb.s_v.as_ref(), (sb.l_w.transpose() * &sb.l_v).as_ref())?;
        let reference = inverse_small(y.as_ref(), "Y")?;
        println!("case {}: x = {:?}", cs.case().label(), x);
        println!("        reference distance {:.1e}", (&x - &reference).norm_l2());
    }
    Ok(())
}
