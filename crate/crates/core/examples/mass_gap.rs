//! Mass gap read off the oscillation spectrum of a rest-frame lattice run.

use massgap::lattice::{evolve, measure_mass_gap, LatticeGrid};
use massgap::spectral::mass_gap;

fn main() -> massgap::Result<()> {
    for (lambda, mu) in [(2.0, 1.0), (2.0, 2.0), (0.5, 1.0)] {
        let g = LatticeGrid::rest_frame(lambda, mu, 1024)?;
        let run = evolve(&g, lambda, mu, 40.0 * 1024.0 * g.dt)?;
        let m = measure_mass_gap(&run.series)?;
        let m0 = mass_gap(lambda, mu)?;
        println!(
            "lambda={lambda} mu={mu}: measured {:.9} exact {m0:.9} rel {:.1e}  even/odd {:.1e}",
            m.omega,
            (m.omega / m0 - 1.0).abs(),
            m.even_ratio()
        );
    }
    Ok(())
}
