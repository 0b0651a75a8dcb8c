use massgap::elliptic::Jacobi;
use massgap::fluctuation::{LameOperator, StabilityProblem};
use massgap::solutions::{
    dispersion_p2, eval_g1, max_scalar_residual, max_su2_residual, scalar_amplitude_modulus, su2_solve, FourMomentum,
    ScalarWaveSolution, DEFAULT_STEP,
};
use proptest::prelude::*;

fn spatial() -> impl Strategy<Value = [f64; 3]> {
    [-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn massless_dispersion(lambda in 0.05f64..20.0, mu in 0.1f64..5.0) {
        let p2 = dispersion_p2(lambda, mu, 0.0).unwrap();
        let exact = mu * mu * (lambda / 2.0).sqrt();
        prop_assert!((p2 - exact).abs() <= 1e-12 * exact.max(1.0));
    }

    #[test]
    fn amplitude_formula(lambda in 0.05f64..20.0, mu in 0.1f64..5.0, msq in 0.0f64..3.0) {
        let (a, kappa) = scalar_amplitude_modulus(lambda, mu, msq).unwrap();
        let mu4 = mu.powi(4);
        let exact = (2.0 * mu4 / (msq + (msq * msq + 2.0 * lambda * mu4).sqrt())).sqrt();
        prop_assert!((a - exact).abs() <= 1e-12 * exact);
        prop_assert!(kappa > -1.0 - 1e-15 && kappa <= 0.0);
    }

    #[test]
    fn g1_odd_in_phase(lambda in 0.1f64..10.0, mu in 0.2f64..3.0, s in spatial(), t in -5.0f64..5.0) {
        let sol = ScalarWaveSolution::boosted(lambda, mu, 0.0, 0.0, s).unwrap();
        let x = [t, 0.3, -0.2, 0.7];
        let mirrored = x.map(|c| -c);
        prop_assert!((eval_g1(&sol, &x) + eval_g1(&sol, &mirrored)).abs() < 1e-12);
    }

    #[test]
    fn scaling_covariance(lambda in 0.1f64..10.0, mu in 0.2f64..3.0, s in 0.2f64..5.0) {
        let a = ScalarWaveSolution::rest_frame(lambda, mu, 0.0, 0.0).unwrap();
        let b = ScalarWaveSolution::rest_frame(lambda, s * mu, 0.0, 0.0).unwrap();
        prop_assert!((b.amplitude() - s * a.amplitude()).abs() <= 1e-12 * b.amplitude());
        prop_assert!((b.p2() - s * s * a.p2()).abs() <= 1e-12 * b.p2());
    }

    #[test]
    fn boosted_momentum_on_shell(lambda in 0.1f64..10.0, mu in 0.2f64..3.0, msq in 0.0f64..2.0, s in spatial()) {
        let sol = ScalarWaveSolution::boosted(lambda, mu, msq, 0.1, s).unwrap();
        let p2 = dispersion_p2(lambda, mu, msq).unwrap();
        prop_assert!((sol.momentum().square() - p2).abs() <= 1e-12 * p2.max(1.0) * (1.0 + s.iter().map(|c| c * c).sum::<f64>()));
    }

    #[test]
    fn scalar_residual_small(lambda in 0.1f64..10.0, mu in 0.2f64..3.0, msq in 0.0f64..2.0, chi in -3.0f64..3.0) {
        let sol = ScalarWaveSolution::rest_frame(lambda, mu, msq, chi).unwrap();
        let r = max_scalar_residual(&sol, 200, 2.0, DEFAULT_STEP).unwrap();
        // scale of the individual terms of p²G'' + m²G + λG³
        let a = sol.amplitude();
        let scale = a * (sol.p2() + msq + lambda * a * a);
        prop_assert!(r / scale < 1e-8, "{}", r);
    }

    #[test]
    fn landau_independent_of_direction(g in 0.2f64..4.0, mu in 0.2f64..3.0, s in spatial()) {
        let p = FourMomentum::on_shell(mu * mu * g, s);
        let a = su2_solve(p, 1.0, g, mu).unwrap();
        let rest = su2_solve(FourMomentum::on_shell(mu * mu * g, [0.0; 3]), 1.0, g, mu).unwrap();
        prop_assert!(a.amplitudes().iter().zip(rest.amplitudes()).all(|(x, y)| (x - y).abs() < 1e-12));
        let exact = mu / g.sqrt();
        prop_assert!(a.amplitudes().iter().all(|x| (x - exact).abs() <= 1e-12 * exact));
        prop_assert!(a.algebraic_residual() < 1e-12 * mu * mu / g);
    }

    #[test]
    fn eigenvalue_scaling(lambda in 0.1f64..10.0, mu in 0.2f64..3.0, s in 0.2f64..5.0) {
        let a = StabilityProblem::on_shell(lambda, mu).unwrap().eigenvalue();
        let b = StabilityProblem::on_shell(lambda, s * mu).unwrap().eigenvalue();
        prop_assert!((b - s * s * a).abs() <= 1e-12 * b.abs());
    }

    #[test]
    fn zero_mode_follows_translation(lambda in 0.1f64..10.0, mu in 0.2f64..3.0, delta in -4.0f64..4.0, t in -5.0f64..5.0) {
        let base = ScalarWaveSolution::rest_frame(lambda, mu, 0.0, 0.0).unwrap();
        let shifted = base.shifted(delta);
        let (op, op_shifted) = (LameOperator::new(base.clone()), LameOperator::new(shifted.clone()));
        let x = [t, 0.0, 0.0, 0.0];
        // w₁ of the shifted background at x is w₁ of the original at phase + δ
        let a = op_shifted.zero_mode(shifted.phase(&x));
        let b = op.zero_mode(base.phase(&x) + delta);
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn massless_amplitude_reference() {
    // A = μ (2/λ)^{1/4}: λ = 2 gives A = μ
    let sol = ScalarWaveSolution::rest_frame(2.0, 1.3, 0.0, 0.0).unwrap();
    assert!((sol.amplitude() - 1.3).abs() < 1e-15);
    assert_eq!(sol.kappa(), -1.0);
    assert!((sol.p2() - 1.69).abs() < 1e-14);
}

#[test]
fn fourth_order_stencil_richardson() {
    // truncation part of the residual drops 16x per halving until roundoff
    let sol = ScalarWaveSolution::rest_frame(2.0, 1.0, 0.0, 0.0).unwrap();
    let r: Vec<f64> = [0.08, 0.04, 0.02].iter().map(|&h| max_scalar_residual(&sol, 400, 2.0, h).unwrap()).collect();
    for w in r.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio} from {r:?}");
    }
    assert!(max_scalar_residual(&sol, 2000, 2.0, DEFAULT_STEP).unwrap() < 1e-8);
}

#[test]
fn perturbed_amplitude_is_detected() {
    let sol = ScalarWaveSolution::rest_frame(2.0, 1.0, 0.0, 0.0).unwrap().with_amplitude_factor(1.01);
    assert!(max_scalar_residual(&sol, 400, 2.0, DEFAULT_STEP).unwrap() > 1e-3);
}

#[test]
fn su2_general_gauge_back_substitution() {
    let p = FourMomentum::on_shell(1.0, [0.8, 0.0, 0.0]);
    let a = su2_solve(p, 2.0, 1.0, 1.0).unwrap();
    let [r1, r2, r3] = a.rhs();
    assert!(r2 == r3 && r1 != r2);
    assert!(a.algebraic_residual() < 1e-12);
    assert!(max_su2_residual(&a, 2000, 2.0, DEFAULT_STEP).unwrap() < 1e-8);
    assert!(max_su2_residual(&a.perturbed(1, 1.01), 400, 2.0, DEFAULT_STEP).unwrap() > 1e-3);
}

#[test]
fn su2_g4_landau_reference() {
    let a = su2_solve(FourMomentum::on_shell(4.0, [0.0; 3]), 1.0, 4.0, 1.0).unwrap();
    assert_eq!(a.amplitudes(), [0.5, 0.5, 0.5]);
}

#[test]
fn lame_zero_mode_ten_periods() {
    let op = LameOperator::massless(2.0, 1.0).unwrap();
    assert!(op.max_residual(|z| op.zero_mode(z), 4000, 10.0, DEFAULT_STEP).unwrap() < 1e-8);
    let w0 = op.wronskian(0.1);
    let span = 10.0 * Jacobi::minus_one().period();
    for i in 0..50 {
        assert!((op.wronskian(0.1 + span * i as f64 / 50.0) - w0).abs() < 1e-10);
    }
}
