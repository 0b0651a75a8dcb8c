//! Landau-gauge Yang-Mills two-point reduction and the free ghost.
//!
//! The gluon two-point function is `δ_ab Π_μν Δ` with `Δ` obeying the scalar
//! Green's equation at `λ = Ng²`, so the checks reuse the scalar machinery
//! verbatim.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{append_tower_checks, RESIDUAL_TOL};
use crate::elliptic::Jacobi;
use crate::error::{ensure_positive, Error, Result};
use crate::numerics::one_sided_derivative;
use crate::report::ResidualReport;
use crate::solutions::{dispersion_p2, FourMomentum, DISPERSION_TOL};
use crate::spectral::mass_n;

const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Tolerance for the projector algebra.
pub const PROJECTOR_TOL: f64 = 1e-12;

/// `Π_μν = g_μν − p_μ p_ν / p²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransverseProjector {
    p: FourMomentum,
    covariant: [[f64; 4]; 4],
}

impl TransverseProjector {
    pub fn new(p: FourMomentum) -> Result<Self> {
        let p2 = p.square();
        if !p2.is_finite() || p2 == 0.0 {
            return Err(Error::MasslessPole);
        }
        let low = p.lower();
        let mut covariant = [[0.0; 4]; 4];
        for (mu, row) in covariant.iter_mut().enumerate() {
            for (nu, c) in row.iter_mut().enumerate() {
                let g = if mu == nu { METRIC[mu] } else { 0.0 };
                *c = g - low[mu] * low[nu] / p2;
            }
        }
        Ok(Self { p, covariant })
    }

    pub fn momentum(&self) -> FourMomentum {
        self.p
    }

    pub fn covariant(&self) -> [[f64; 4]; 4] {
        self.covariant
    }

    /// `Π^μ_ν`, the form that squares to itself.
    pub fn mixed(&self) -> [[f64; 4]; 4] {
        let mut m = self.covariant;
        for (mu, row) in m.iter_mut().enumerate() {
            for c in row.iter_mut() {
                *c *= METRIC[mu];
            }
        }
        m
    }

    /// `Π_μν v^ν`.
    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(&self.covariant) {
            *o = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        out
    }

    fn scale(&self) -> f64 {
        self.p.components().iter().fold(1.0f64, |m, c| m.max(c.abs()))
    }

    /// `max |Π_μν p^ν|` relative to the largest momentum component.
    pub fn annihilation_residual(&self) -> f64 {
        let s = self.scale();
        self.apply(self.p.components()).iter().fold(0.0f64, |m, c| m.max(c.abs())) / s
    }

    /// `max |Π^μ_ρ Π^ρ_ν − Π^μ_ν|` relative to the largest entry of `Π`.
    pub fn idempotence_residual(&self) -> f64 {
        let m = self.mixed();
        let mut worst = 0.0f64;
        let mut scale = 1.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let sq: f64 = (0..4).map(|r| m[i][r] * m[r][j]).sum();
                worst = worst.max((sq - m[i][j]).abs());
                scale = scale.max(m[i][j].abs());
            }
        }
        worst / scale
    }
}

/// Yang-Mills two-point check for colour factor `N`, coupling `g` and
/// background momentum `p` (which must satisfy `p² = μ²sqrt(Ng²/2)`).
pub fn ym_two_point_check(n_color: u32, g: f64, mu: f64, p: FourMomentum) -> Result<ResidualReport> {
    if n_color == 0 {
        return Err(Error::Domain("colour factor N must be positive".into()));
    }
    ensure_positive("g", g)?;
    ensure_positive("mu", mu)?;
    let lambda = n_color as f64 * g * g;
    let expected = dispersion_p2(lambda, mu, 0.0)?;
    let actual = p.square();
    let on_shell = (actual - expected).abs() <= DISPERSION_TOL * expected.max(1.0);
    if !on_shell {
        return Err(Error::Dispersion { actual, expected });
    }
    let projector = TransverseProjector::new(p)?;
    let mut report = ResidualReport::new("ds-check ym")
        .param("N", n_color as f64)
        .param("g", g)
        .param("mu", mu)
        .param("lambda", lambda);
    report.check("transversality", projector.annihilation_residual(), PROJECTOR_TOL);
    report.check("projector idempotence", projector.idempotence_residual(), PROJECTOR_TOL);
    append_tower_checks(&mut report, lambda, mu)?;

    // gluon masses from the gauge-field frequency against the scalar spectrum
    let quarter = Jacobi::minus_one().quarter_period();
    let omega = (mu * mu * (lambda / 2.0).sqrt()).sqrt();
    let worst = (0..6)
        .map(|n| {
            let gluon = (2 * n + 1) as f64 * PI * omega / (2.0 * quarter);
            let scalar = mass_n(n, lambda, mu)?;
            Ok((gluon - scalar).abs() / scalar)
        })
        .try_fold(0.0f64, |m, r: Result<f64>| r.map(|r| m.max(r)))?;
    report.check("spectrum mapping", worst, RESIDUAL_TOL);
    Ok(report)
}

/// Free ghost propagator and its Green's-function witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhostCheck {
    /// `−1/p²` (times `δ_am`): `∂² → −p²` in the `(+,−,−,−)` signature.
    pub propagator: f64,
    /// `d/dt` jump of the rest-frame kernel `t·θ(t)` at the source.
    pub jump: f64,
    /// The ghost-gluon mixed function `K₂` is identically zero.
    pub k2_zero: bool,
}

pub fn ghost_check(p2: f64) -> Result<GhostCheck> {
    if !p2.is_finite() {
        return Err(Error::Domain(format!("p2 must be finite, got {p2}")));
    }
    if p2 == 0.0 {
        return Err(Error::MasslessPole);
    }
    let kernel = |t: f64| if t > 0.0 { t } else { 0.0 };
    let h = 1e-3;
    let jump = one_sided_derivative(kernel, 0.0, h) - one_sided_derivative(kernel, 0.0, -h);
    Ok(GhostCheck { propagator: -1.0 / p2, jump, k2_zero: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyson_schwinger::scalar_tower_report;

    fn on_shell(n: u32, g: f64, mu: f64, spatial: [f64; 3]) -> FourMomentum {
        FourMomentum::on_shell(dispersion_p2(n as f64 * g * g, mu, 0.0).unwrap(), spatial)
    }

    #[test]
    fn projector_algebra() {
        let pr = TransverseProjector::new(on_shell(2, 1.0, 1.0, [0.3, -1.2, 0.7])).unwrap();
        assert!(pr.annihilation_residual() < 1e-12);
        assert!(pr.idempotence_residual() < 1e-12);
        assert!(matches!(TransverseProjector::new(FourMomentum::new(1.0, 1.0, 0.0, 0.0)), Err(Error::MasslessPole)));
    }

    #[test]
    fn ym_matches_scalar() {
        let ym = ym_two_point_check(2, 1.0, 1.0, on_shell(2, 1.0, 1.0, [0.0; 3])).unwrap();
        assert!(ym.pass, "{ym}");
        let scalar = scalar_tower_report(2.0, 1.0).unwrap();
        for c in &scalar.checks {
            let y = ym.checks.iter().find(|y| y.name == c.name).unwrap();
            assert_eq!(y.value.to_bits(), c.value.to_bits(), "{}", c.name);
        }
    }

    #[test]
    fn ym_off_shell() {
        let p = FourMomentum::rest(2.0);
        assert!(matches!(ym_two_point_check(2, 1.0, 1.0, p), Err(Error::Dispersion { .. })));
    }

    #[test]
    fn ghost() {
        let c = ghost_check(4.0).unwrap();
        assert_eq!(c.propagator, -0.25);
        assert!((c.jump - 1.0).abs() < 1e-12);
        assert!(c.k2_zero);
        assert!(matches!(ghost_check(0.0), Err(Error::MasslessPole)));
    }
}
