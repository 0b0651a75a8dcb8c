mod common;

use massgap::lattice::{evolve, measure_mass_gap, phase_velocity, LatticeGrid, TimeSeries};
use massgap::spectral::mass_gap;
use massgap::Error;

fn rest_run(spp: usize, periods: f64) -> massgap::lattice::Evolution {
    let g = LatticeGrid::rest_frame(2.0, 1.0, spp).unwrap();
    evolve(&g, 2.0, 1.0, periods * spp as f64 * g.dt).unwrap()
}

#[test]
fn second_order_convergence() {
    let errs: Vec<f64> = [256, 512, 1024, 2048].iter().map(|&spp| rest_run(spp, 10.0).max_error).collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 4.0).abs() < 0.1, "{errs:?}");
    }
}

#[test]
fn default_step_trajectory_error() {
    // second-order Verlet at T/1024 over ten periods: 1.57e-4 measured
    assert!(rest_run(1024, 10.0).max_error < 2e-4);
}

#[test]
fn fine_step_trajectory_error() {
    assert!(rest_run(16384, 10.0).max_error < 1e-6);
}

#[test]
fn energy_drift_over_hundred_periods() {
    let run = rest_run(1024, 100.0);
    assert!(run.energy.drift < 1e-6, "{:?}", run.energy);
    assert!(run.energy.max_fluctuation < 1e-4);
}

#[test]
fn travelling_wave_default_resolution() {
    let g = LatticeGrid::travelling(2.0, 1.0, 512, 0.25).unwrap();
    let w = g.exact_wave(2.0, 1.0).unwrap();
    let period = w.phase_period() / w.momentum().p0;
    let run = evolve(&g, 2.0, 1.0, 10.0 * period).unwrap();
    assert!(run.max_error < 1e-4, "{}", run.max_error);
    assert!(run.energy.drift < 1e-6);
}

#[test]
fn phase_velocity_matches_dispersion() {
    let g = LatticeGrid::travelling(2.0, 1.0, 512, 0.25).unwrap();
    let (v, exact) = phase_velocity(&g, 2.0, 1.0).unwrap();
    assert!(common::rel(v, exact) < 1e-3, "{v} vs {exact}");
}

#[test]
fn gap_from_rest_frame_oscillation() {
    for (lambda, mu) in [(2.0, 1.0), (2.0, 2.0)] {
        let g = LatticeGrid::rest_frame(lambda, mu, 1024).unwrap();
        let run = evolve(&g, lambda, mu, 40.0 * 1024.0 * g.dt).unwrap();
        let m = measure_mass_gap(&run.series).unwrap();
        let m0 = mass_gap(lambda, mu).unwrap();
        assert!(common::rel(m.omega, m0) < 1e-3, "{} vs {m0}", m.omega);
        assert!(m.even_ratio() < 1e-6);
        assert!(m.odd_powers_decreasing());
    }
    // mu = 2 doubles the gap: 2.3963
    assert!((mass_gap(2.0, 2.0).unwrap() - 2.3963).abs() < 1e-4);
}

#[test]
fn cfl_violation_is_an_error() {
    let mut g = LatticeGrid::travelling(2.0, 1.0, 64, 0.25).unwrap();
    g.dt = g.spacing;
    assert!(matches!(g.validate(), Err(Error::Cfl { .. })));
    assert!(matches!(evolve(&g, 2.0, 1.0, 1.0), Err(Error::Cfl { .. })));
}

#[test]
fn short_series_is_refused() {
    let run = rest_run(128, 10.0);
    assert!(matches!(measure_mass_gap(&run.series), Err(Error::SeriesTooShort { .. })));
}

#[test]
fn series_csv_round_trip() {
    let run = rest_run(64, 2.0);
    let mut buf = Vec::new();
    run.series.write_csv(&mut buf).unwrap();
    let back = TimeSeries::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back.values(), run.series.values());
    assert_eq!(back.sample_dt(), run.series.sample_dt());
}
