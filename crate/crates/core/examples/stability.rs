//! Fluctuation eigencheck about the sn background and the Lame zero mode.

use massgap::elliptic::Jacobi;
use massgap::fluctuation::{LameOperator, StabilityProblem};
use massgap::solutions::DEFAULT_STEP;

fn main() -> massgap::Result<()> {
    let (lambda, mu) = (2.0, 1.0);
    let span = 2.0 * Jacobi::minus_one().period();
    let zetas: Vec<f64> = (0..1000).map(|i| 0.1 + span * i as f64 / 1000.0).collect();
    let problem = StabilityProblem::on_shell(lambda, mu)?;
    let c = problem.check(&zetas, DEFAULT_STEP)?;
    println!("eigenvalue {:.12}  fitted {:.12}  residual {:.2e}", c.eigenvalue, c.fitted_eigenvalue, c.residual);
    let op = LameOperator::massless(lambda, mu)?;
    let z = op.max_residual(|x| op.zero_mode(x), 1000, 2.0, DEFAULT_STEP)?;
    println!("zero mode residual {z:.2e}, Wronskian at 0.3: {:.12}", op.wronskian(0.3));
    Ok(())
}
