//! Velocity-Verlet evolution from exact initial data in both lattice modes.

use massgap::lattice::{evolve, phase_velocity, LatticeGrid};

fn main() -> massgap::Result<()> {
    let (lambda, mu) = (2.0, 1.0);
    for spp in [256, 512, 1024, 2048] {
        let g = LatticeGrid::rest_frame(lambda, mu, spp)?;
        let run = evolve(&g, lambda, mu, 10.0 * spp as f64 * g.dt)?;
        println!("rest frame T/{spp:<5} error {:.3e}  energy drift {:.1e}", run.max_error, run.energy.drift);
    }
    let g = LatticeGrid::travelling(lambda, mu, 512, 0.25)?;
    let run = evolve(&g, lambda, mu, 10.0 * run_period(&g, lambda, mu)?)?;
    println!("1+1D 512 sites: error {:.3e}  energy drift {:.1e}", run.max_error, run.energy.drift);
    let (v, exact) = phase_velocity(&g, lambda, mu)?;
    println!("phase velocity {v:.7} (exact {exact:.7})");
    Ok(())
}

fn run_period(g: &LatticeGrid, lambda: f64, mu: f64) -> massgap::Result<f64> {
    let w = g.exact_wave(lambda, mu)?;
    Ok(w.phase_period() / w.momentum().p0)
}
