//! Exact classical solutions: the quartic scalar sn-wave family and the SU(2)
//! diagonal ansatz.
//!
//! Metric signature is `(+,-,-,-)` and the wave phase is
//! `ζ = p⁰t − p⃗·x⃗ + χ`. Every solution depends on spacetime only through `ζ`,
//! so the d'Alembertian acts as `p² d²/dζ²` and all residuals are evaluated
//! along the wave coordinate.

use serde::{Deserialize, Serialize};

use crate::elliptic::{EllipticParameter, Jacobi};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::numerics::{check_step, second_derivative};

/// Default finite-difference step along ζ.
pub const DEFAULT_STEP: f64 = 2e-3;

/// Relative tolerance used when checking a momentum against a dispersion
/// relation.
pub const DISPERSION_TOL: f64 = 1e-10;

/// Spacetime point `(t, x, y, z)`.
pub type SpacetimePoint = [f64; 4];

/// Contravariant four-momentum `p^μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl FourMomentum {
    pub fn new(p0: f64, p1: f64, p2: f64, p3: f64) -> Self {
        Self { p0, p1, p2, p3 }
    }

    /// `(ω, 0, 0, 0)`.
    pub fn rest(omega: f64) -> Self {
        Self::new(omega, 0.0, 0.0, 0.0)
    }

    /// On-shell momentum with invariant mass squared `p2` and the given
    /// spatial part; `p0 > 0`.
    pub fn on_shell(p2: f64, spatial: [f64; 3]) -> Self {
        let s2: f64 = spatial.iter().map(|x| x * x).sum();
        Self::new((p2 + s2).sqrt(), spatial[0], spatial[1], spatial[2])
    }

    /// `p² = p0² − p1² − p2² − p3²`.
    pub fn square(&self) -> f64 {
        self.p0 * self.p0 - self.p1 * self.p1 - self.p2 * self.p2 - self.p3 * self.p3
    }

    /// `p·x = p0 t − p⃗·x⃗`.
    pub fn dot(&self, x: &SpacetimePoint) -> f64 {
        self.p0 * x[0] - self.p1 * x[1] - self.p2 * x[2] - self.p3 * x[3]
    }

    pub fn components(&self) -> [f64; 4] {
        [self.p0, self.p1, self.p2, self.p3]
    }

    /// Covariant components `p_μ`.
    pub fn lower(&self) -> [f64; 4] {
        [self.p0, -self.p1, -self.p2, -self.p3]
    }

    pub fn spatial(&self, i: usize) -> f64 {
        match i {
            1 => self.p1,
            2 => self.p2,
            3 => self.p3,
            _ => panic!("spatial index must be 1, 2 or 3, got {i}"),
        }
    }
}

fn check_dispersion(p: &FourMomentum, expected: f64) -> Result<()> {
    let actual = p.square();
    if (actual - expected).abs() > DISPERSION_TOL * expected.abs().max(1.0) {
        return Err(Error::Dispersion { actual, expected });
    }
    Ok(())
}

fn check_scalar_params(lambda: f64, mu: f64, msq: f64) -> Result<()> {
    ensure_positive("lambda", lambda)?;
    ensure_positive("mu", mu)?;
    ensure_finite("m^2", msq)?;
    if msq < 0.0 {
        return Err(Error::Domain(format!("m^2 must be non-negative, got {msq}")));
    }
    Ok(())
}

/// Amplitude `sqrt(2μ⁴ / (m² + R))` and parameter `κ = (R − m²)/(−m² − R)`,
/// `R = sqrt(m⁴ + 2λμ⁴)`.
pub fn scalar_amplitude_modulus(lambda: f64, mu: f64, msq: f64) -> Result<(f64, f64)> {
    check_scalar_params(lambda, mu, msq)?;
    let mu4 = mu.powi(4);
    let r = (msq * msq + 2.0 * lambda * mu4).sqrt();
    let amplitude = (2.0 * mu4 / (msq + r)).sqrt();
    let kappa = (r - msq) / (-msq - r);
    Ok((amplitude, kappa))
}

/// `p² = m² + λμ⁴ / (m² + sqrt(m⁴ + 2λμ⁴))`.
pub fn dispersion_p2(lambda: f64, mu: f64, msq: f64) -> Result<f64> {
    check_scalar_params(lambda, mu, msq)?;
    let mu4 = mu.powi(4);
    let r = (msq * msq + 2.0 * lambda * mu4).sqrt();
    Ok(msq + lambda * mu4 / (msq + r))
}

/// The exact one-point function `G₁ = A·sn(p·x + χ, κ)`, which solves
/// `∂²φ + m²φ + λφ³ = 0` when `p` obeys the dispersion relation.
#[derive(Debug, Clone)]
pub struct ScalarWaveSolution {
    lambda: f64,
    mu: f64,
    msq: f64,
    chi: f64,
    momentum: FourMomentum,
    amplitude: f64,
    kappa: f64,
    jacobi: Jacobi,
}

impl ScalarWaveSolution {
    /// Rest-frame solution, `p = (ω, 0, 0, 0)` with `ω² = dispersion_p2`.
    pub fn rest_frame(lambda: f64, mu: f64, msq: f64, chi: f64) -> Result<Self> {
        let p2 = dispersion_p2(lambda, mu, msq)?;
        Self::with_momentum(lambda, mu, msq, chi, FourMomentum::rest(p2.sqrt()))
    }

    /// Massless (`m² = 0`) rest-frame solution, the closed-form case
    /// `κ = −1`, `A = μ(2/λ)^{1/4}`, `p² = μ²sqrt(λ/2)`.
    pub fn massless(lambda: f64, mu: f64) -> Result<Self> {
        Self::rest_frame(lambda, mu, 0.0, 0.0)
    }

    /// Moving solution with the given spatial momentum.
    pub fn boosted(lambda: f64, mu: f64, msq: f64, chi: f64, spatial: [f64; 3]) -> Result<Self> {
        let p2 = dispersion_p2(lambda, mu, msq)?;
        Self::with_momentum(lambda, mu, msq, chi, FourMomentum::on_shell(p2, spatial))
    }

    /// Explicit momentum; fails unless it satisfies the dispersion relation.
    pub fn with_momentum(lambda: f64, mu: f64, msq: f64, chi: f64, p: FourMomentum) -> Result<Self> {
        ensure_finite("chi", chi)?;
        let (amplitude, kappa) = scalar_amplitude_modulus(lambda, mu, msq)?;
        check_dispersion(&p, dispersion_p2(lambda, mu, msq)?)?;
        Ok(Self {
            lambda,
            mu,
            msq,
            chi,
            momentum: p,
            amplitude,
            kappa,
            jacobi: Jacobi::new(EllipticParameter::new(kappa)?),
        })
    }

    /// Same solution with the phase shifted by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        let mut s = self.clone();
        s.chi += delta;
        s
    }

    /// The same wave with `G₁ ≡ 0` amplitude; used as the trivial solution.
    pub fn trivial(&self) -> Self {
        let mut s = self.clone();
        s.amplitude = 0.0;
        s
    }

    /// Amplitude rescaled by `factor` (no longer a solution unless factor = 1).
    pub fn with_amplitude_factor(&self, factor: f64) -> Self {
        let mut s = self.clone();
        s.amplitude *= factor;
        s
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn msq(&self) -> f64 {
        self.msq
    }
    pub fn chi(&self) -> f64 {
        self.chi
    }
    pub fn momentum(&self) -> FourMomentum {
        self.momentum
    }
    pub fn p2(&self) -> f64 {
        self.momentum.square()
    }
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub(crate) fn jacobi(&self) -> &Jacobi {
        &self.jacobi
    }

    /// Period of the wave in ζ, `4K(κ)`.
    pub fn phase_period(&self) -> f64 {
        self.jacobi.period()
    }

    /// `ζ = p·x + χ`.
    pub fn phase(&self, x: &SpacetimePoint) -> f64 {
        self.momentum.dot(x) + self.chi
    }

    /// `G₁(x)`.
    pub fn eval(&self, x: &SpacetimePoint) -> f64 {
        self.at_phase(self.phase(x))
    }

    /// `A·sn(ζ, κ)`.
    pub fn at_phase(&self, zeta: f64) -> f64 {
        self.amplitude * self.jacobi.sn(zeta)
    }

    /// `|p² G₁'' + m² G₁ + λ G₁³|` at phase ζ, second derivative by the
    /// fourth-order centered stencil.
    pub fn residual_at_phase(&self, zeta: f64, h: f64) -> Result<f64> {
        check_step(h, self.phase_period())?;
        let p2 = self.p2();
        let f = |z: f64| self.amplitude * self.jacobi.sn(z);
        let g = f(zeta);
        Ok((p2 * second_derivative(f, zeta, h) + self.msq * g + self.lambda * g * g * g).abs())
    }

    /// Residual scale `λA³` used for relative tolerances.
    pub fn residual_scale(&self) -> f64 {
        self.lambda * self.amplitude.powi(3)
    }
}

/// `G₁(x) = A·sn(p·x + χ, κ)`.
pub fn eval_g1(sol: &ScalarWaveSolution, x: &SpacetimePoint) -> f64 {
    sol.eval(x)
}

/// Finite-difference residual of the classical equation at `x`.
pub fn classical_residual_scalar(sol: &ScalarWaveSolution, x: &SpacetimePoint, h: f64) -> Result<f64> {
    sol.residual_at_phase(sol.phase(x), h)
}

/// Max residual over `points` equally spaced phases covering `periods` wave
/// periods starting at ζ = 0.1 (offset keeps samples off the symmetry points).
pub fn max_scalar_residual(sol: &ScalarWaveSolution, points: usize, periods: f64, h: f64) -> Result<f64> {
    let span = periods * sol.phase_period();
    phase_grid(points, span).map(|z| sol.residual_at_phase(z, h)).try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
}

pub fn phase_grid(points: usize, span: f64) -> impl Iterator<Item = f64> {
    let n = points.max(1);
    (0..n).map(move |i| 0.1 + span * i as f64 / n as f64)
}

/// Diagonal SU(2) ansatz `A¹₁ = X sn, A²₂ = Y sn, A³₃ = Z sn` with
/// `sn = sn(p·x + χ, −1)` and `p² = μ²g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SU2Ansatz {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub p: FourMomentum,
    pub alpha: f64,
    pub g: f64,
    pub mu: f64,
    pub chi: f64,
}

impl SU2Ansatz {
    pub fn amplitudes(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Right-hand sides `(2/g²)(1 − 1/α)p_i² + 2μ²/g` of the amplitude system.
    pub fn rhs(&self) -> [f64; 3] {
        su2_rhs(&self.p, self.alpha, self.g, self.mu)
    }

    /// Max absolute deviation of the back-substituted algebraic system.
    pub fn algebraic_residual(&self) -> f64 {
        let [x2, y2, z2] = self.amplitudes().map(|a| a * a);
        let [r1, r2, r3] = self.rhs();
        [(y2 + z2 - r1).abs(), (x2 + z2 - r2).abs(), (x2 + y2 - r3).abs()].into_iter().fold(0.0, f64::max)
    }

    /// Copy with one amplitude rescaled.
    pub fn perturbed(&self, component: usize, factor: f64) -> Self {
        let mut a = *self;
        match component {
            0 => a.x *= factor,
            1 => a.y *= factor,
            2 => a.z *= factor,
            _ => panic!("component index must be 0, 1 or 2"),
        }
        a
    }

    pub fn phase(&self, x: &SpacetimePoint) -> f64 {
        self.p.dot(x) + self.chi
    }

    /// Residuals of the three diagonal component equations at phase ζ:
    /// `(p² + (1 − 1/α)p_a²) A_a'' + g²(Σ_{b≠a} (A^b_b)²) A^a_a`.
    pub fn component_residuals(&self, zeta: f64, h: f64) -> Result<[f64; 3]> {
        let j = Jacobi::minus_one();
        check_step(h, j.period())?;
        let sn = j.sn(zeta);
        let sn_dd = second_derivative(|z| j.sn(z), zeta, h);
        let amps = self.amplitudes();
        let p2 = self.p.square();
        let gauge = 1.0 - 1.0 / self.alpha;
        let mut out = [0.0; 3];
        for a in 0..3 {
            let coeff = p2 + gauge * self.p.spatial(a + 1).powi(2);
            let others: f64 = (0..3).filter(|&b| b != a).map(|b| amps[b] * amps[b]).sum();
            let field = amps[a] * sn;
            out[a] = (coeff * amps[a] * sn_dd + self.g * self.g * others * sn * sn * field).abs();
        }
        Ok(out)
    }

    /// Residual scale `g²·max(X,Y,Z)³`.
    pub fn residual_scale(&self) -> f64 {
        let a = self.x.max(self.y).max(self.z);
        self.g * self.g * a.powi(3)
    }
}

fn su2_rhs(p: &FourMomentum, alpha: f64, g: f64, mu: f64) -> [f64; 3] {
    let gauge = 1.0 - 1.0 / alpha;
    [1, 2, 3].map(|i| 2.0 / (g * g) * gauge * p.spatial(i).powi(2) + 2.0 * mu * mu / g)
}

/// Solve the diagonal amplitude system. With `S = (r₁ + r₂ + r₃)/2`:
/// `X² = S − r₁`, `Y² = S − r₂`, `Z² = S − r₃`; the non-negative root is taken.
pub fn su2_solve(p: FourMomentum, alpha: f64, g: f64, mu: f64) -> Result<SU2Ansatz> {
    ensure_positive("alpha", alpha)?;
    ensure_positive("g", g)?;
    ensure_positive("mu", mu)?;
    for c in p.components() {
        ensure_finite("momentum component", c)?;
    }
    check_dispersion(&p, mu * mu * g)?;
    let rhs = su2_rhs(&p, alpha, g, mu);
    let s = 0.5 * rhs.iter().sum::<f64>();
    let mut amps = [0.0; 3];
    for (i, (name, r)) in ['X', 'Y', 'Z'].into_iter().zip(rhs).enumerate() {
        let sq = s - r;
        if sq < 0.0 {
            return Err(Error::NoRealAnsatz { component: name, value: sq });
        }
        amps[i] = sq.sqrt();
    }
    Ok(SU2Ansatz { x: amps[0], y: amps[1], z: amps[2], p, alpha, g, mu, chi: 0.0 })
}

/// Max over the three diagonal component equations at `x`.
pub fn classical_residual_su2(ansatz: &SU2Ansatz, x: &SpacetimePoint, h: f64) -> Result<f64> {
    let r = ansatz.component_residuals(ansatz.phase(x), h)?;
    Ok(r.into_iter().fold(0.0, f64::max))
}

/// Max SU(2) residual over a phase grid covering `periods` periods.
pub fn max_su2_residual(ansatz: &SU2Ansatz, points: usize, periods: f64, h: f64) -> Result<f64> {
    let span = periods * Jacobi::minus_one().period();
    phase_grid(points, span)
        .map(|z| ansatz.component_residuals(z, h).map(|r| r.into_iter().fold(0.0, f64::max)))
        .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
}
