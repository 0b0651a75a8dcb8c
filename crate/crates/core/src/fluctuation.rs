//! Fluctuations about the sn wave: the Lamé operator
//! `p² d²/dζ² + m² + 3λG₁²(ζ)`, its zero mode and second solution, and the
//! stability eigenfunction `sn·cn`.

use serde::{Deserialize, Serialize};

use crate::elliptic::Jacobi;
use crate::error::{ensure_finite, ensure_positive, Result};
use crate::numerics::{check_step, second_derivative};
use crate::solutions::{phase_grid, FourMomentum, ScalarWaveSolution};

/// The fluctuation operator about a background wave.
#[derive(Debug, Clone)]
pub struct LameOperator {
    background: ScalarWaveSolution,
}

impl LameOperator {
    pub fn new(background: ScalarWaveSolution) -> Self {
        Self { background }
    }

    /// Operator about the massless rest-frame wave.
    pub fn massless(lambda: f64, mu: f64) -> Result<Self> {
        Ok(Self::new(ScalarWaveSolution::massless(lambda, mu)?))
    }

    pub fn background(&self) -> &ScalarWaveSolution {
        &self.background
    }

    /// `p² w'' + m² w + 3λ G₁² w` at ζ, with `w''` from the fourth-order stencil.
    pub fn apply<F: Fn(f64) -> f64>(&self, w: F, zeta: f64, h: f64) -> Result<f64> {
        check_step(h, self.background.phase_period())?;
        let bg = &self.background;
        let g1 = bg.at_phase(zeta);
        let value = w(zeta);
        Ok(bg.p2() * second_derivative(&w, zeta, h) + bg.msq() * value + 3.0 * bg.lambda() * g1 * g1 * value)
    }

    /// Max `|L[w]|` over `points` phases spanning `periods` periods.
    pub fn max_residual<F: Fn(f64) -> f64>(&self, w: F, points: usize, periods: f64, h: f64) -> Result<f64> {
        let span = periods * self.background.phase_period();
        let mut worst = 0.0f64;
        for z in phase_grid(points, span) {
            worst = worst.max(self.apply(&w, z, h)?.abs());
        }
        Ok(worst)
    }

    /// Zero mode `w₁ = dG₁/dζ = A·cn(ζ,κ)·dn(ζ,κ)`.
    pub fn zero_mode(&self, zeta: f64) -> f64 {
        let v = self.background.jacobi().eval(zeta);
        self.background.amplitude() * v.cn * v.dn
    }

    /// `dw₁/dζ = A·(−sn·dn² − κ·sn·cn²)`.
    pub fn zero_mode_derivative(&self, zeta: f64) -> f64 {
        let v = self.background.jacobi().eval(zeta);
        let kappa = self.background.kappa();
        self.background.amplitude() * (-v.sn * v.dn * v.dn - kappa * v.sn * v.cn * v.cn)
    }

    /// Second independent solution `w₂ = ½(ζ·w₁ + G₁)`, the derivative of the
    /// solution family along its scale `μ`. Only valid for `m² = 0`, where
    /// rescaling μ maps solutions onto solutions.
    pub fn second_solution(&self, zeta: f64) -> f64 {
        0.5 * (zeta * self.zero_mode(zeta) + self.background.at_phase(zeta))
    }

    pub fn second_solution_derivative(&self, zeta: f64) -> f64 {
        self.zero_mode(zeta) + 0.5 * zeta * self.zero_mode_derivative(zeta)
    }

    /// `w₁ w₂' − w₂ w₁'`; constant along ζ for a pair of solutions.
    pub fn wronskian(&self, zeta: f64) -> f64 {
        self.zero_mode(zeta) * self.second_solution_derivative(zeta)
            - self.second_solution(zeta) * self.zero_mode_derivative(zeta)
    }
}

/// Zero mode of the massless wave at (λ, μ).
pub fn zero_mode(lambda: f64, mu: f64, zeta: f64) -> Result<f64> {
    Ok(LameOperator::massless(lambda, mu)?.zero_mode(zeta))
}

/// Second solution of the massless Lamé equation at (λ, μ).
pub fn second_solution(lambda: f64, mu: f64, zeta: f64) -> Result<f64> {
    Ok(LameOperator::massless(lambda, mu)?.second_solution(zeta))
}

/// Tolerance on `|p² − μ²sqrt(λ/2)|` (relative) for the on-shell flag.
const ON_SHELL_TOL: f64 = 1e-10;

/// Outcome of the stability eigencheck.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityCheck {
    /// Closed-form eigenvalue `−3μ²sqrt(λ/2)`.
    pub eigenvalue: f64,
    /// Least-squares eigenvalue `⟨Lφ, φ⟩ / ⟨φ, φ⟩` over the grid.
    pub fitted_eigenvalue: f64,
    /// `max |Lφ − ε φ|` over the grid.
    pub residual: f64,
    pub onshell: bool,
}

impl StabilityCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.onshell && self.residual <= tol && self.eigenvalue <= 0.0
    }
}

/// Stability problem `p² φ'' + 3λφ₀² φ = εφ` about
/// `φ₀ = μ(2/λ)^{1/4} sn(ζ, −1)` with a caller-supplied `p²`. The eigenfunction
/// `sn·cn` only closes on shell.
#[derive(Debug, Clone)]
pub struct StabilityProblem {
    lambda: f64,
    mu: f64,
    p2: f64,
    jacobi: Jacobi,
}

impl StabilityProblem {
    pub fn new(lambda: f64, mu: f64, p2: f64) -> Result<Self> {
        ensure_positive("lambda", lambda)?;
        ensure_positive("mu", mu)?;
        ensure_finite("p^2", p2)?;
        Ok(Self { lambda, mu, p2, jacobi: Jacobi::minus_one() })
    }

    pub fn on_shell(lambda: f64, mu: f64) -> Result<Self> {
        Self::new(lambda, mu, mu * mu * (lambda / 2.0).sqrt())
    }

    pub fn onshell_p2(&self) -> f64 {
        self.mu * self.mu * (self.lambda / 2.0).sqrt()
    }

    pub fn is_onshell(&self) -> bool {
        let target = self.onshell_p2();
        (self.p2 - target).abs() <= ON_SHELL_TOL * target.max(1.0)
    }

    /// `−3μ²sqrt(λ/2)`.
    pub fn eigenvalue(&self) -> f64 {
        -3.0 * self.onshell_p2()
    }

    pub fn eigenfunction(&self, zeta: f64) -> f64 {
        let v = self.jacobi.eval(zeta);
        v.sn * v.cn
    }

    fn apply(&self, zeta: f64, h: f64) -> f64 {
        let amp2 = self.mu * self.mu * (2.0 / self.lambda).sqrt();
        let sn = self.jacobi.sn(zeta);
        let phi = self.eigenfunction(zeta);
        self.p2 * second_derivative(|z| self.eigenfunction(z), zeta, h) + 3.0 * self.lambda * amp2 * sn * sn * phi
    }

    pub fn check(&self, zetas: &[f64], h: f64) -> Result<StabilityCheck> {
        check_step(h, self.jacobi.period())?;
        let eps = self.eigenvalue();
        let mut num = 0.0;
        let mut den = 0.0;
        let mut residual = 0.0f64;
        for &z in zetas {
            let phi = self.eigenfunction(z);
            let l = self.apply(z, h);
            num += l * phi;
            den += phi * phi;
            residual = residual.max((l - eps * phi).abs());
        }
        let fitted = if den > 0.0 { num / den } else { f64::NAN };
        Ok(StabilityCheck { eigenvalue: eps, fitted_eigenvalue: fitted, residual, onshell: self.is_onshell() })
    }
}

/// Stability eigencheck on a ζ grid for the on-shell wave at (λ, μ).
pub fn stability_eigencheck(lambda: f64, mu: f64, zetas: &[f64], h: f64) -> Result<StabilityCheck> {
    StabilityProblem::on_shell(lambda, mu)?.check(zetas, h)
}

/// Free-field eigenvalue `−(p² − m²)` of `∂² + m²` on a plane wave.
pub fn free_field_eigencheck(p: &FourMomentum, mass: f64) -> f64 {
    -(p.square() - mass * mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::complete_k;
    use crate::solutions::DEFAULT_STEP;

    fn grid(n: usize, span: f64) -> Vec<f64> {
        phase_grid(n, span).collect()
    }

    #[test]
    fn zero_mode_values() {
        let k = complete_k(-1.0).unwrap().value();
        assert!(zero_mode(2.0, 1.0, k).unwrap().abs() < 1e-13);
        assert_eq!(zero_mode(2.0, 1.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn zero_mode_solves_lame() {
        let op = LameOperator::massless(2.0, 1.0).unwrap();
        let r = op.max_residual(|z| op.zero_mode(z), 200, 10.0, DEFAULT_STEP).unwrap();
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn zero_mode_of_massive_background() {
        let bg = ScalarWaveSolution::rest_frame(2.0, 1.0, 0.7, 0.2).unwrap();
        let op = LameOperator::new(bg);
        let r = op.max_residual(|z| op.zero_mode(z), 200, 3.0, DEFAULT_STEP).unwrap();
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn second_solution_and_wronskian() {
        let op = LameOperator::massless(2.0, 1.0).unwrap();
        assert_eq!(op.second_solution(0.0), 0.0);
        let r = op.max_residual(|z| op.second_solution(z), 200, 2.0, DEFAULT_STEP).unwrap();
        assert!(r < 1e-8, "residual {r}");
        assert!((op.wronskian(0.3) - op.wronskian(2.1)).abs() < 1e-8);
        // W = A² for the massless wave
        assert!((op.wronskian(0.9) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unequal_coefficients_are_not_a_solution() {
        // ¼ζw₁ + ½G₁ leaves L[w] = ½λG₁³ behind
        let op = LameOperator::massless(2.0, 1.0).unwrap();
        let bg = op.background().clone();
        let w = |z: f64| 0.25 * z * op.zero_mode(z) + 0.5 * bg.at_phase(z);
        for z in [0.4, 1.1, 2.5] {
            let l = op.apply(w, z, DEFAULT_STEP).unwrap();
            let expected = 0.5 * bg.lambda() * bg.at_phase(z).powi(3);
            assert!((l - expected).abs() < 1e-8, "{l} vs {expected}");
        }
    }

    #[test]
    fn stability_eigenvalues() {
        let zs = grid(200, 2.0 * complete_k(-1.0).unwrap().period());
        let c = stability_eigencheck(2.0, 1.0, &zs, DEFAULT_STEP).unwrap();
        assert_eq!(c.eigenvalue, -3.0);
        assert!(c.residual < 1e-8 && c.onshell && c.passes(1e-8));
        assert!((c.fitted_eigenvalue + 3.0).abs() < 1e-8);

        let c = stability_eigencheck(8.0, 1.0, &zs, DEFAULT_STEP).unwrap();
        assert!((c.eigenvalue + 6.0).abs() < 1e-15);
        assert!(c.residual < 1e-8);
    }

    #[test]
    fn stability_off_shell_fails() {
        let zs = grid(100, 5.0);
        let c = StabilityProblem::new(2.0, 1.0, 1.3).unwrap().check(&zs, DEFAULT_STEP).unwrap();
        assert!(!c.onshell);
        assert!(c.residual > 1e-3);
        assert!(!c.passes(1e-8));
    }

    #[test]
    fn eigenvalue_scaling() {
        for s in [0.5, 2.0, 3.7] {
            let e1 = StabilityProblem::on_shell(2.7, 1.3).unwrap().eigenvalue();
            let e2 = StabilityProblem::on_shell(2.7, 1.3 * s).unwrap().eigenvalue();
            assert!((e2 - s * s * e1).abs() < 1e-12 * e2.abs());
        }
    }

    #[test]
    fn zero_mode_translation_witness() {
        let bg = ScalarWaveSolution::massless(2.0, 1.0).unwrap();
        let delta = 0.83;
        let a = LameOperator::new(bg.clone());
        let b = LameOperator::new(bg.shifted(delta));
        let x = [0.37, 0.0, 0.0, 0.0];
        let zeta_a = bg.phase(&x) + delta;
        let zeta_b = b.background().phase(&x);
        assert!((a.zero_mode(zeta_a) - b.zero_mode(zeta_b)).abs() < 1e-12);
    }

    #[test]
    fn free_field_values() {
        assert_eq!(free_field_eigencheck(&FourMomentum::rest(1.0), 1.0), 0.0);
        let p = FourMomentum::rest(2f64.sqrt());
        assert!((free_field_eigencheck(&p, 1.0) + 1.0).abs() < 1e-15);
        assert_eq!(free_field_eigencheck(&FourMomentum::rest(0.0), 1.0), 1.0);
    }
}
