//! Quick per-module property suites behind each subcommand's `--selftest`.
//! Deterministic parameter grids, no randomness.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::dyson_schwinger::{scalar_tower_report, ym_two_point_check};
use crate::elliptic::{complete_k, EllipticParameter, Jacobi};
use crate::error::Result;
use crate::fluctuation::{stability_eigencheck, LameOperator};
use crate::lattice::{evolve, measure_mass_gap, LatticeGrid, TimeSeries};
use crate::numerics::GaussLegendre;
use crate::report::ResidualReport;
use crate::solutions::{dispersion_p2, max_scalar_residual, max_su2_residual, su2_solve, FourMomentum};
use crate::solutions::{phase_grid, ScalarWaveSolution, DEFAULT_STEP};
use crate::spectral::{dimreg_i2, kappa0, mass_n, propagator_momentum, weight_n, SpectralSum};

const COUPLINGS: [(f64, f64); 4] = [(2.0, 1.0), (0.5, 0.7), (7.0, 1.3), (1.0, 2.0)];

fn report(command: &str) -> ResidualReport {
    ResidualReport::new(format!("{command} --selftest"))
}

fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

pub fn elliptic() -> Result<ResidualReport> {
    let mut r = report("elliptic");
    let ms = [-1.0, -0.5, 0.0, 0.3, 0.6, 0.9, 0.99];
    let (mut pyth, mut modular, mut period, mut parity) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for m in ms {
        let j = Jacobi::new(EllipticParameter::new(m)?);
        for i in 0..81 {
            let u = -20.0 + 0.5 * i as f64 + 0.013;
            let v = j.eval(u);
            pyth = pyth.max((v.sn * v.sn + v.cn * v.cn - 1.0).abs());
            modular = modular.max((v.dn * v.dn + m * v.sn * v.sn - 1.0).abs());
            period = period.max((j.sn(u + j.period()) - v.sn).abs());
            parity = parity.max((j.sn(-u) + v.sn).abs());
        }
    }
    r.check("sn^2 + cn^2 - 1", pyth, 1e-12);
    r.check("dn^2 + m sn^2 - 1", modular, 1e-12);
    r.check("sn periodicity", period, 1e-10);
    r.check("sn parity", parity, 1e-15);
    let quad = GaussLegendre::new(16).integrate(|t| 1.0 / (1.0 + t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 32);
    r.check("K(-1) vs quadrature", (complete_k(-1.0)?.value() - quad).abs(), 1e-12);
    Ok(r)
}

pub fn classical() -> Result<ResidualReport> {
    let mut r = report("verify-classical");
    let mut worst = 0.0f64;
    for (lambda, mu) in COUPLINGS {
        for msq in [0.0, 0.3] {
            let rest = ScalarWaveSolution::rest_frame(lambda, mu, msq, 0.2)?;
            let moving = ScalarWaveSolution::boosted(lambda, mu, msq, -0.4, [0.3, 0.1, -0.7])?;
            for sol in [rest, moving] {
                worst = worst.max(max_scalar_residual(&sol, 400, 2.0, DEFAULT_STEP)? / sol.residual_scale());
            }
        }
    }
    r.check("scalar residual / lambda A^3", worst, 1e-8);
    let mut su2 = 0.0f64;
    let mut landau = 0.0f64;
    for (g, mu) in [(1.0, 1.0), (0.6, 1.4), (2.0, 0.5)] {
        let p2 = mu * mu * g;
        let a = su2_solve(FourMomentum::on_shell(p2, [0.4, -0.2, 0.1]), 1.0, g, mu)?;
        let exact = mu / g.sqrt();
        landau = landau.max(max_of(a.amplitudes().map(|x| (x - exact).abs())));
        su2 = su2.max(max_su2_residual(&a, 400, 2.0, DEFAULT_STEP)? / a.residual_scale());
        let b = su2_solve(FourMomentum::on_shell(p2, [0.3, 0.2, 0.0]), 2.0, g, mu)?;
        su2 = su2.max(max_su2_residual(&b, 400, 2.0, DEFAULT_STEP)? / b.residual_scale());
    }
    r.check("su2 residual / g^2 A^3", su2, 1e-8);
    r.check("Landau X=Y=Z=mu/sqrt(g)", landau, 1e-14);
    Ok(r)
}

pub fn stability() -> Result<ResidualReport> {
    let mut r = report("stability");
    let zetas: Vec<f64> = phase_grid(400, 2.0 * Jacobi::minus_one().period()).collect();
    let (mut res, mut fit, mut lame) = (0.0f64, 0.0f64, 0.0f64);
    for (lambda, mu) in COUPLINGS {
        let c = stability_eigencheck(lambda, mu, &zetas, DEFAULT_STEP)?;
        res = res.max(c.residual / c.eigenvalue.abs());
        fit = fit.max((c.fitted_eigenvalue / c.eigenvalue - 1.0).abs());
        let op = LameOperator::massless(lambda, mu)?;
        let scale = lambda * op.background().amplitude().powi(3);
        lame = lame.max(op.max_residual(|z| op.zero_mode(z), 400, 2.0, DEFAULT_STEP)? / scale);
    }
    r.check("eigen residual / |eps|", res, 1e-8);
    r.check("fitted eigenvalue rel. error", fit, 1e-8);
    r.check("zero-mode residual / lambda A^3", lame, 1e-8);
    Ok(r)
}

pub fn spectrum() -> Result<ResidualReport> {
    let mut r = report("spectrum");
    let mut ratio = 0.0f64;
    for (lambda, mu) in COUPLINGS {
        let m0 = mass_n(0, lambda, mu)?;
        for n in 0..20 {
            ratio = ratio.max((mass_n(n, lambda, mu)? / m0 - (2 * n + 1) as f64).abs() / (2 * n + 1) as f64);
        }
    }
    r.check("m_n/m_0 - (2n+1), relative", ratio, 4.0 * f64::EPSILON);
    let total = SpectralSum::new(2.0, 1.0, 20)?.total_weight();
    r.check("sum B_n - 1", (total - 1.0).abs(), 1e-12);
    let decreasing = (0..20).all(|n| weight_n(n + 1) < weight_n(n));
    r.flag("weights decreasing", decreasing);
    r.check("kappa0 - 1.215018785", (kappa0() - 1.215_018_785).abs(), 1e-8);
    Ok(r)
}

pub fn propagator() -> Result<ResidualReport> {
    let mut r = report("propagator");
    let d = dimreg_i2(2.0, 1.0, 1.0, 20)?;
    let s = SpectralSum::new(2.0, 1.0, 20)?;
    let oracle: f64 = s.lines.iter().map(|l| l.weight * l.mass * l.mass).sum::<f64>() / (16.0 * PI * PI);
    r.check("pole coefficient vs series", (d.pole_coefficient - oracle).abs(), 1e-12);
    r.check("quoted ratio - 1/sqrt(2)", (d.quoted_ratio - 0.5f64.sqrt()).abs(), 1e-8);
    let m0 = mass_n(0, 2.0, 1.0)?;
    let p2 = 1e4 * m0 * m0;
    let g = propagator_momentum(p2, 2.0, 1.0, 1e-12, 20)?;
    r.check("p^2 G(p^2) -> 1 at 1e4 m0^2", (g.re * p2 - 1.0).abs(), 1e-3);
    let v = propagator_momentum(0.37, 2.0, 1.0, 1e-3, 20)?;
    r.flag("Im G < 0 for +i epsilon", v.im < 0.0);
    Ok(r)
}

pub fn ds_check() -> Result<ResidualReport> {
    let mut r = report("ds-check");
    for (lambda, mu) in [(2.0, 1.0), (0.7, 1.3)] {
        let s = scalar_tower_report(lambda, mu)?;
        r.flag(format!("scalar tower lambda={lambda} mu={mu}"), s.pass);
    }
    let p = FourMomentum::on_shell(dispersion_p2(2.0, 1.0, 0.0)?, [0.2, -0.5, 0.9]);
    let ym = ym_two_point_check(2, 1.0, 1.0, p)?;
    r.flag("ym N=2 g=1", ym.pass);
    Ok(r)
}

pub fn lattice() -> Result<ResidualReport> {
    let mut r = report("lattice-run");
    let errs: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&spp| {
            let g = LatticeGrid::rest_frame(2.0, 1.0, spp)?;
            Ok(evolve(&g, 2.0, 1.0, 2.0 * g.dt * spp as f64)?.max_error)
        })
        .collect::<Result<_>>()?;
    for w in errs.windows(2) {
        r.check("dt-halving ratio - 4", (w[0] / w[1] - 4.0).abs(), 0.2);
    }
    let g = LatticeGrid::travelling(2.0, 1.0, 128, 0.25)?;
    let run = evolve(&g, 2.0, 1.0, 20.0)?;
    r.check("1+1D energy drift", run.energy.drift, 1e-6);
    Ok(r)
}

pub fn measure_gap() -> Result<ResidualReport> {
    let mut r = report("measure-gap");
    let s = TimeSeries::sample(|t| (t + 0.3).sin(), 0.0, 0.05, 4096)?;
    r.check("sine calibration", (measure_mass_gap(&s)?.omega - 1.0).abs(), 1e-4);
    let g = LatticeGrid::rest_frame(2.0, 1.0, 128)?;
    let run = evolve(&g, 2.0, 1.0, 40.0 * 128.0 * g.dt)?;
    let m = measure_mass_gap(&run.series)?;
    r.check("rest-frame gap rel. error", (m.omega / mass_n(0, 2.0, 1.0)? - 1.0).abs(), 1e-3);
    r.check("even-harmonic power ratio", m.even_ratio(), 1e-6);
    Ok(r)
}
