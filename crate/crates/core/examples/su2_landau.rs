//! Diagonal SU(2) ansatz in Landau gauge and at a general gauge parameter.

use massgap::solutions::{max_su2_residual, su2_solve, FourMomentum, DEFAULT_STEP};

fn main() -> massgap::Result<()> {
    let (g, mu) = (1.0, 1.0);
    for (alpha, spatial) in [(1.0, [0.0, 0.0, 0.0]), (1.0, [0.3, -0.4, 1.2]), (2.0, [0.5, 0.0, 0.0])] {
        let p = FourMomentum::on_shell(mu * mu * g, spatial);
        match su2_solve(p, alpha, g, mu) {
            Ok(a) => {
                let r = max_su2_residual(&a, 2000, 2.0, DEFAULT_STEP)?;
                println!("alpha={alpha} p={spatial:?}: X={:.12} Y={:.12} Z={:.12} residual {r:.2e}", a.x, a.y, a.z);
            }
            Err(e) => println!("alpha={alpha} p={spatial:?}: {e}"),
        }
    }
    Ok(())
}
