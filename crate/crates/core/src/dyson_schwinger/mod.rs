//! Residual checks of the Dyson-Schwinger tower on the exact solutions.
//!
//! Delta sources are never discretized: Green's equations are checked through
//! their jump condition plus the homogeneous residual away from the source.
//! Convolutions live on the rest-frame time axis with the spatial `δ³`
//! factors contracted symbolically.

mod convolution;
mod yang_mills;

pub use convolution::{
    g3_at_origin, g3_at_origin_with, g3_convolution, g4_convolution, Anchor, Certificate, EllipticKernels, OriginCheck,
    QuadratureSpec, RestFrameKernels,
};
pub use yang_mills::{ghost_check, ym_two_point_check, GhostCheck, TransverseProjector};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Result};
use crate::numerics::second_derivative;
use crate::report::ResidualReport;
use crate::solutions::{phase_grid, ScalarWaveSolution, DEFAULT_STEP};
use crate::spectral::greens_jump_check;

/// Coincident-point values entering the tower. All zero in the consistent
/// solution; `g5_zero`/`g6_zero` are recorded assumptions with nothing to
/// compute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureConditions {
    pub g2_0: f64,
    pub g3_00: f64,
    pub g4_00x: f64,
    pub k2_0: f64,
    pub p2_0: f64,
    pub g5_zero: bool,
    pub g6_zero: bool,
}

impl Default for ClosureConditions {
    fn default() -> Self {
        Self { g2_0: 0.0, g3_00: 0.0, g4_00x: 0.0, k2_0: 0.0, p2_0: 0.0, g5_zero: true, g6_zero: true }
    }
}

impl ClosureConditions {
    pub fn is_zero(&self) -> bool {
        [self.g2_0, self.g3_00, self.g4_00x, self.k2_0, self.p2_0].iter().all(|&v| v == 0.0)
            && self.g5_zero
            && self.g6_zero
    }

    /// Background consistent with these conditions: the rest-frame wave with
    /// `m² = 3λG₂(0)`.
    pub fn background(&self, lambda: f64, mu: f64, chi: f64) -> Result<ScalarWaveSolution> {
        ScalarWaveSolution::rest_frame(lambda, mu, 3.0 * lambda * self.g2_0, chi)
    }
}

/// Sampling of the wave coordinate for residual maxima.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualGrid {
    pub points: usize,
    pub periods: f64,
    /// Finite-difference step along ζ.
    pub h: f64,
}

impl Default for ResidualGrid {
    fn default() -> Self {
        Self { points: 2000, periods: 2.0, h: DEFAULT_STEP }
    }
}

/// Max over the grid of `|p²G₁'' + λ(G₁³ + 3G₂(0)G₁ + G₃(0,0))|`.
pub fn g1_residual(sol: &ScalarWaveSolution, closure: &ClosureConditions, grid: &ResidualGrid) -> f64 {
    let lambda = sol.lambda();
    let p2 = sol.p2();
    let span = grid.periods * sol.phase_period();
    phase_grid(grid.points, span)
        .map(|z| {
            let g = sol.at_phase(z);
            let d2 = if sol.amplitude() == 0.0 { 0.0 } else { second_derivative(|s| sol.at_phase(s), z, grid.h) };
            (p2 * d2 + lambda * (g * g * g + 3.0 * closure.g2_0 * g + closure.g3_00)).abs()
        })
        .fold(0.0, f64::max)
}

/// `(|jump − 1|, ODE residual)` of the rest-frame two-point kernel at phase
/// root `k`.
pub fn g2_greens_residual(lambda: f64, mu: f64, k: i64) -> Result<(f64, f64)> {
    let c = greens_jump_check(lambda, mu, k)?;
    Ok((c.jump_error(), c.ode_residual))
}

/// Tolerance on residuals of the exact solutions.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Tolerance on quadratures that vanish by support.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Full scalar tower check at `(λ, μ)` with zero closure.
pub fn scalar_tower_report(lambda: f64, mu: f64) -> Result<ResidualReport> {
    ensure_positive("lambda", lambda)?;
    ensure_positive("mu", mu)?;
    let mut report = ResidualReport::new("ds-check scalar").param("lambda", lambda).param("mu", mu);
    append_tower_checks(&mut report, lambda, mu)?;
    Ok(report)
}

/// Checks shared by the scalar and Yang-Mills reports, so the two produce
/// identical numbers once `λ = Ng²`.
pub(crate) fn append_tower_checks(report: &mut ResidualReport, lambda: f64, mu: f64) -> Result<()> {
    let closure = ClosureConditions::default();
    let grid = ResidualGrid::default();
    let sol = closure.background(lambda, mu, 0.0)?;
    report.check("g1 residual", g1_residual(&sol, &closure, &grid), RESIDUAL_TOL);
    for k in 0..3 {
        let (jump, ode) = g2_greens_residual(lambda, mu, k)?;
        report.check(format!("g2 jump error k={k}"), jump, RESIDUAL_TOL);
        report.check(format!("g2 ode residual k={k}"), ode, RESIDUAL_TOL);
    }
    let kernels = EllipticKernels::new(lambda, mu, 0)?;
    let spec = QuadratureSpec::default();
    let origin = g3_at_origin_with(&kernels, &spec)?;
    report.check("g3(0,0)", origin.value.abs(), 1e-12);
    report.flag("g3(0,0) support-disjoint", origin.certificate == Some(Certificate::SupportDisjoint));
    let period = kernels.period();
    let tz = -0.37 * period;
    report.check("g3(0,x-z)", g3_convolution(&kernels, 0.0, 0.0, tz, &spec)?.abs(), SUPPORT_TOL);
    report.check("g3(x-y,0)", g3_convolution(&kernels, 0.0, tz, 0.0, &spec)?.abs(), SUPPORT_TOL);
    let tw = -0.61 * period;
    report.check("g4(0,0,x-y)", g4_convolution(&kernels, 0.0, 0.0, 0.0, tw, &spec)?.abs(), SUPPORT_TOL);
    report.check("g4(0,x-y,x-z)", g4_convolution(&kernels, 0.0, 0.0, tz, tw, &spec)?.abs(), SUPPORT_TOL);
    report.flag("closure conditions zero", closure.is_zero());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_exact_solution_zero_closure() {
        let sol = ScalarWaveSolution::massless(2.0, 1.0).unwrap();
        let r = g1_residual(&sol, &ClosureConditions::default(), &ResidualGrid::default());
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn g1_injected_g3_is_constant_offset() {
        let sol = ScalarWaveSolution::massless(2.0, 1.0).unwrap();
        let closure = ClosureConditions { g3_00: 0.1, ..Default::default() };
        let grid = ResidualGrid::default();
        let r = g1_residual(&sol, &closure, &grid);
        assert!((r - 0.2).abs() < 1e-8, "{r}");
        let r = g1_residual(&sol.trivial(), &closure, &grid);
        assert!((r - 0.2).abs() < 1e-15);
    }

    #[test]
    fn g1_trivial_solution() {
        let sol = ScalarWaveSolution::massless(2.0, 1.0).unwrap().trivial();
        assert_eq!(g1_residual(&sol, &ClosureConditions::default(), &ResidualGrid::default()), 0.0);
    }

    #[test]
    fn g1_shifted_background() {
        let closure = ClosureConditions { g2_0: 0.05, ..Default::default() };
        let sol = closure.background(2.0, 1.0, 0.3).unwrap();
        assert!(g1_residual(&sol, &closure, &ResidualGrid::default()) < 1e-8);
        // the unshifted wave does not solve the shifted equation
        let bare = ScalarWaveSolution::massless(2.0, 1.0).unwrap();
        assert!(g1_residual(&bare, &closure, &ResidualGrid::default()) > 1e-3);
    }

    #[test]
    fn g2_residuals() {
        for k in 0..2 {
            let (jump, ode) = g2_greens_residual(2.0, 1.0, k).unwrap();
            assert!(jump < 1e-8 && ode < 1e-8, "k={k}: {jump} {ode}");
        }
    }

    #[test]
    fn scalar_report_passes() {
        let r = scalar_tower_report(2.0, 1.0).unwrap();
        assert!(r.pass, "{r}");
    }
}
