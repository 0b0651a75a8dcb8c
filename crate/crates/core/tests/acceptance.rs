//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines are always printed.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;

use massgap::dyson_schwinger::{
    g3_at_origin, g3_convolution, g4_convolution, scalar_tower_report, ym_two_point_check, EllipticKernels,
    QuadratureSpec, RestFrameKernels, TransverseProjector,
};
use massgap::elliptic::{complete_k, jacobi, Jacobi};
use massgap::fluctuation::{stability_eigencheck, LameOperator};
use massgap::lattice::{evolve, measure_mass_gap, LatticeGrid};
use massgap::solutions::{
    dispersion_p2, max_scalar_residual, max_su2_residual, phase_grid, su2_solve, FourMomentum, ScalarWaveSolution,
    DEFAULT_STEP,
};
use massgap::spectral::{dimreg_i2, greens_jump_check, kappa0, mass_gap, mass_n, Branch, RestFrameKernel, SpectralSum};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn elliptic_identities() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = (-50.0f64..50.0, -1.0f64..0.99);
    let (mut pyth, mut modular) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let (u, m) = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let v = jacobi(u, m).map_err(|e| e.to_string())?;
        pyth = pyth.max((v.sn * v.sn + v.cn * v.cn - 1.0).abs());
        modular = modular.max((v.dn * v.dn + m * v.sn * v.sn - 1.0).abs());
    }
    let k = complete_k(-1.0).map_err(|e| e.to_string())?.value();
    let oracle = common::k_quadrature(-1.0);
    let dk = (k - oracle).abs();
    ensure(
        pyth < 1e-12 && modular < 1e-12 && (k - oracle).abs() < 1e-10 && (k - 1.311_028_777_1).abs() < 1e-10,
        format!("max |sn²+cn²−1| {pyth:.1e}, max |dn²+m sn²−1| {modular:.1e}, K(−1) {k:.12} (oracle Δ {dk:.1e})"),
    )
}

fn classical_exactness() -> Outcome {
    let sol = ScalarWaveSolution::rest_frame(2.0, 1.0, 0.0, 0.0).map_err(|e| e.to_string())?;
    let r = |h: f64| max_scalar_residual(&sol, 400, 2.0, h).unwrap_or(f64::NAN);
    let residual = max_scalar_residual(&sol, 2000, 2.0, DEFAULT_STEP).map_err(|e| e.to_string())?;
    // fourth order: the truncation part drops 16× per halving
    let richardson = [r(0.08) / r(0.04), r(0.04) / r(0.02)];
    let fourth_order = richardson.iter().all(|x| (x - 16.0).abs() < 1.0);
    let mut su2 = 0.0f64;
    let mut landau = 0.0f64;
    for (alpha, g, mu, s) in
        [(1.0, 1.0, 1.0, [0.0; 3]), (1.0, 0.6, 1.4, [0.4, -0.2, 0.1]), (2.0, 1.0, 1.0, [0.8, 0.0, 0.0])]
    {
        let a = su2_solve(FourMomentum::on_shell(mu * mu * g, s), alpha, g, mu).map_err(|e| e.to_string())?;
        su2 = su2.max(max_su2_residual(&a, 2000, 2.0, DEFAULT_STEP).map_err(|e| e.to_string())?);
        if alpha == 1.0 {
            let exact = mu / g.sqrt();
            landau = landau.max(a.amplitudes().iter().map(|x| (x - exact).abs()).fold(0.0, f64::max));
        }
    }
    ensure(
        residual < 1e-8 && fourth_order && su2 < 1e-8 && landau == 0.0,
        format!(
            "scalar residual {residual:.1e}, Richardson ratios {:.2}/{:.2}, SU(2) residual {su2:.1e}, Landau |X−μ/√g| {landau:.1e}",
            richardson[0], richardson[1]
        ),
    )
}

fn spectrum_and_weights() -> Outcome {
    let mut worst = 0.0f64;
    for (lambda, mu) in [(2.0, 1.0), (0.5, 0.7), (7.0, 1.3)] {
        let m0 = mass_gap(lambda, mu).map_err(|e| e.to_string())?;
        for n in 0..=20 {
            let odd = (2 * n + 1) as f64;
            worst = worst.max((mass_n(n, lambda, mu).map_err(|e| e.to_string())? / m0 - odd).abs() / odd);
        }
    }
    let total = SpectralSum::new(2.0, 1.0, 20).map_err(|e| e.to_string())?.total_weight();
    let k0 = kappa0();
    ensure(
        worst <= f64::EPSILON && (total - 1.0).abs() < 1e-6 && (k0 - 1.215_018_785).abs() < 1e-8,
        format!("max rel |m_n/m_0 − (2n+1)| {worst:.1e}, Σ B_n − 1 = {:.1e}, κ₀ = {k0:.12}", total - 1.0),
    )
}

fn greens_function() -> Outcome {
    let mut jump = 0.0f64;
    let mut ode = 0.0f64;
    for k in 0..3 {
        let c = greens_jump_check(2.0, 1.0, k).map_err(|e| e.to_string())?;
        jump = jump.max(c.jump_error());
        ode = ode.max(c.ode_residual);
    }
    let wrong = RestFrameKernel::with_phase(2.0, 1.0, 0.0).map_err(|e| e.to_string())?.greens_check(Branch::Retarded);
    let miss = wrong.jump_error().max(wrong.continuity);
    ensure(
        jump < 1e-8 && ode < 1e-8 && miss > 0.1,
        format!("|jump − 1| {jump:.1e}, ODE residual {ode:.1e}, wrong-phase control misses by {miss:.3}"),
    )
}

fn stability() -> Outcome {
    let span = 2.0 * Jacobi::minus_one().period();
    let zetas: Vec<f64> = phase_grid(2000, span).collect();
    let mut residual = 0.0f64;
    let mut eps_err = 0.0f64;
    let mut lame = 0.0f64;
    for (lambda, mu) in [(2.0, 1.0), (0.5, 0.7), (7.0, 1.3)] {
        let c = stability_eigencheck(lambda, mu, &zetas, DEFAULT_STEP).map_err(|e| e.to_string())?;
        residual = residual.max(c.residual);
        eps_err = eps_err.max((c.eigenvalue + 3.0 * mu * mu * (lambda / 2.0).sqrt()).abs());
        let op = LameOperator::massless(lambda, mu).map_err(|e| e.to_string())?;
        lame = lame.max(op.max_residual(|z| op.zero_mode(z), 2000, 2.0, DEFAULT_STEP).map_err(|e| e.to_string())?);
    }
    ensure(
        residual < 1e-8 && eps_err < 1e-12 && lame < 1e-8,
        format!("ε residual {residual:.1e}, |ε + 3μ²√(λ/2)| {eps_err:.1e}, zero-mode residual {lame:.1e}"),
    )
}

fn closure() -> Outcome {
    let origin = g3_at_origin(2.0, 1.0).map_err(|e| e.to_string())?;
    let k = EllipticKernels::new(2.0, 1.0, 0).map_err(|e| e.to_string())?;
    let p = k.period();
    let spec = QuadratureSpec::default();
    let g3_edge = g3_convolution(&k, 0.0, 0.0, -0.37 * p, &spec).map_err(|e| e.to_string())?.abs();
    let g4_edge = g4_convolution(&k, 0.0, 0.0, 0.0, -0.61 * p, &spec).map_err(|e| e.to_string())?.abs();
    let (x, y, z) = (0.77 * p, 0.05 * p, 0.21 * p);
    let got = g3_convolution(&k, x, y, z, &spec).map_err(|e| e.to_string())?;
    let f = |t1: f64| k.propagator(x - t1) * k.one_point(t1 - y) * k.propagator(t1 - y) * k.propagator(t1 - z);
    let want = -6.0 * k.coupling() * common::adaptive_simpson(&f, z, x, 1e-13);
    let rel = common::rel(got, want);
    ensure(
        origin.value.abs() < 1e-12 && g3_edge < 1e-10 && g4_edge < 1e-10 && rel < 1e-6,
        format!(
            "G₃(0,0) {:.1e}, G₃(0,x−z) {g3_edge:.1e}, G₄(0,0,x−y) {g4_edge:.1e}, generic G₃ vs adaptive oracle rel {rel:.1e}",
            origin.value.abs()
        ),
    )
}

fn dynamics() -> Outcome {
    let (lambda, mu) = (2.0, 1.0);
    let m0 = mass_gap(lambda, mu).map_err(|e| e.to_string())?;
    let g = LatticeGrid::rest_frame(lambda, mu, 1024).map_err(|e| e.to_string())?;
    let period = 1024.0 * g.dt;
    let run = evolve(&g, lambda, mu, 32.5 * period).map_err(|e| e.to_string())?;
    let gap = measure_mass_gap(&run.series).map_err(|e| e.to_string())?;
    let gap_err = common::rel(gap.omega, m0);
    let long = evolve(&g, lambda, mu, 100.0 * period).map_err(|e| e.to_string())?;
    let errs: Vec<f64> = [256, 512, 1024, 2048]
        .iter()
        .map(|&spp| {
            let g = LatticeGrid::rest_frame(lambda, mu, spp).unwrap();
            evolve(&g, lambda, mu, 10.0 * spp as f64 * g.dt).map(|r| r.max_error).unwrap_or(f64::NAN)
        })
        .collect();
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    let second_order = ratios.iter().all(|r| (r - 4.0).abs() < 0.1);
    ensure(
        gap_err < 1e-3 && long.energy.drift < 1e-6 && gap.even_ratio() < 1e-6 && second_order,
        format!(
            "gap rel error {gap_err:.1e} over {:.1} periods, energy drift {:.1e} over 100 periods, even/odd {:.1e}, dt-halving ratios {:.3}/{:.3}/{:.3}",
            gap.periods, long.energy.drift, gap.even_ratio(), ratios[0], ratios[1], ratios[2]
        ),
    )
}

fn yang_mills_mapping() -> Outcome {
    let (n, g, mu) = (2u32, 1.0, 1.0);
    let lambda = n as f64 * g * g;
    let scalar = scalar_tower_report(lambda, mu).map_err(|e| e.to_string())?;
    let p = FourMomentum::on_shell(dispersion_p2(lambda, mu, 0.0).map_err(|e| e.to_string())?, [0.3, -0.1, 0.5]);
    let ym = ym_two_point_check(n, g, mu, p).map_err(|e| e.to_string())?;
    let identical = scalar
        .checks
        .iter()
        .all(|c| ym.checks.iter().any(|d| d.name == c.name && d.value.to_bits() == c.value.to_bits()));
    let proj = TransverseProjector::new(p).map_err(|e| e.to_string())?;
    let annihilation = proj.annihilation_residual();
    ensure(
        identical && ym.pass && annihilation < 1e-12,
        format!(
            "{} scalar checks bit-identical under λ = Ng²: {identical}, Π p residual {annihilation:.1e}",
            scalar.checks.len()
        ),
    )
}

fn dimreg() -> Outcome {
    let d = dimreg_i2(2.0, 1.0, 1.0, 20).map_err(|e| e.to_string())?;
    let s = SpectralSum::new(2.0, 1.0, 20).map_err(|e| e.to_string())?;
    let series: f64 = s.lines.iter().map(|l| l.weight * l.mass * l.mass).sum::<f64>() / (16.0 * PI * PI);
    let diff = (d.pole_coefficient - series).abs();
    ensure(
        diff < 1e-8 && (d.quoted_ratio - 0.5f64.sqrt()).abs() < 1e-8,
        format!(
            "pole {:.12} vs series Δ {diff:.1e}; quoted closed form {:.12}, ratio {:.12} (1/√2, reported, unresolved)",
            d.pole_coefficient, d.quoted_pole_coefficient, d.quoted_ratio
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("elliptic identities", elliptic_identities),
        ("classical exactness", classical_exactness),
        ("mass spectrum and weights", spectrum_and_weights),
        ("Green's function", greens_function),
        ("stability eigencheck", stability),
        ("coincident-point closure", closure),
        ("dynamics", dynamics),
        ("Yang-Mills to scalar mapping", yang_mills_mapping),
        ("dim-reg coefficients", dimreg),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
