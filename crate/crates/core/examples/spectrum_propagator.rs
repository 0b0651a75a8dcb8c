//! Mass spectrum, weights and the momentum-space propagator.

use massgap::spectral::{propagator_momentum, SpectralSum};

fn main() -> massgap::Result<()> {
    let (lambda, mu) = (2.0, 1.0);
    let s = SpectralSum::new(lambda, mu, 8)?;
    println!("{:>3} {:>20} {:>22}", "n", "mass", "weight");
    for l in &s.lines {
        println!("{:>3} {:>20.15} {:>22.15e}", l.n, l.mass, l.weight);
    }
    println!("sum of weights {:.15}, tail bound {:.2e}", s.total_weight(), s.tail_bound);
    for p2 in [-1.0, 0.5, 4.0, 100.0] {
        let g = propagator_momentum(p2, lambda, mu, 1e-9, 20)?;
        println!("G({p2:>6}) = {:.12e} {:+.3e} i", g.re, g.im);
    }
    Ok(())
}
