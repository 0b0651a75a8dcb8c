//! Dyson-Schwinger residual tower for the scalar theory and Yang-Mills in
//! Landau gauge, plus a convolution value away from the support edges.

use massgap::dyson_schwinger::{
    g3_convolution, scalar_tower_report, ym_two_point_check, EllipticKernels, QuadratureSpec,
};
use massgap::solutions::{dispersion_p2, FourMomentum};

fn main() -> massgap::Result<()> {
    let scalar = scalar_tower_report(2.0, 1.0)?;
    println!("{scalar}");
    let p = FourMomentum::on_shell(dispersion_p2(2.0, 1.0, 0.0)?, [0.2, 0.0, 0.7]);
    let ym = ym_two_point_check(2, 1.0, 1.0, p)?;
    println!("Yang-Mills N=2 g=1: pass={}", ym.pass);
    let k = EllipticKernels::new(2.0, 1.0, 0)?;
    let period = k.kernel().period();
    let g3 = g3_convolution(&k, 0.77 * period, 0.05 * period, 0.21 * period, &QuadratureSpec::default())?;
    println!("G3 at generic retarded points: {g3:.12e}");
    Ok(())
}
