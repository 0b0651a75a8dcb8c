//! Scalar sn-wave: amplitude, dispersion and finite-difference residuals.

use massgap::solutions::{max_scalar_residual, ScalarWaveSolution, DEFAULT_STEP};

fn main() -> massgap::Result<()> {
    for (lambda, mu, msq) in [(2.0, 1.0, 0.0), (0.5, 1.3, 0.0), (2.0, 1.0, 0.4)] {
        let rest = ScalarWaveSolution::rest_frame(lambda, mu, msq, 0.0)?;
        let moving = ScalarWaveSolution::boosted(lambda, mu, msq, 0.3, [0.5, 0.0, -0.2])?;
        println!(
            "lambda={lambda} mu={mu} m^2={msq}: A={:.12} kappa={:.12} p^2={:.12}",
            rest.amplitude(),
            rest.kappa(),
            rest.p2()
        );
        for (label, sol) in [("rest", rest), ("boosted", moving)] {
            let r = max_scalar_residual(&sol, 2000, 2.0, DEFAULT_STEP)?;
            println!("  {label:<8} max residual {r:.3e}");
        }
    }
    Ok(())
}
