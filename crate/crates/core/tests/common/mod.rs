//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `K(m) = ∫₀^{π/2} dθ / sqrt(1 − m sin²θ)` by adaptive quadrature.
pub fn k_quadrature(m: f64) -> f64 {
    adaptive_simpson(&|t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-14)
}

/// `(sn, cn, dn)` at `u` by RK4 on `sn' = cn dn, cn' = −sn dn, dn' = −m sn cn`.
pub fn jacobi_rk4(u: f64, m: f64, steps: usize) -> (f64, f64, f64) {
    let h = u / steps as f64;
    let rhs = |y: [f64; 3]| [y[1] * y[2], -y[0] * y[2], -m * y[0] * y[1]];
    let mut y = [0.0, 1.0, 1.0];
    for _ in 0..steps {
        let k1 = rhs(y);
        let k2 = rhs([0, 1, 2].map(|i| y[i] + 0.5 * h * k1[i]));
        let k3 = rhs([0, 1, 2].map(|i| y[i] + 0.5 * h * k2[i]));
        let k4 = rhs([0, 1, 2].map(|i| y[i] + h * k3[i]));
        y = [0, 1, 2].map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    (y[0], y[1], y[2])
}

/// Relative error with an absolute floor.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
