//! Two-point function of the quartic theory: the odd-integer mass spectrum,
//! the Yukawa weights, the momentum-space pole sum, the rest-frame position
//! kernel and its Green's-function normalization, and the regularized
//! coincident-point integral.
//!
//! ```text
//! m_n = (2n+1) π/(2K(−1)) (λ/2)^{1/4} μ
//! B_n = π³/(4K³(−1)) · (2n+1)² e^{−(n+½)π} / (1 + e^{−(2n+1)π})
//! G₂(p) = Σ_n B_n / (p² − m_n² + iε),        Σ_n B_n = 1
//! ```
//!
//! `κ₀` is the fourth-power weighted sum
//! `Σ_n (2n+1)⁴ e^{−(n+½)π} / (1 + e^{−(2n+1)π}) = 1.215018785...`;
//! it is what makes `Σ_n B_n m_n²` close in terms of `K(−1)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{phase_root, Jacobi};
use crate::error::{ensure_finite, ensure_positive, Result};
use crate::numerics::{compensated_sum, one_sided_derivative, second_derivative, CompensatedSum};

/// Default truncation of every spectral sum.
pub const DEFAULT_NMAX: usize = 20;

/// Prefactor of the weight bound `B_n ≤ 3.44·(2n+1)²e^{−(2n+1)π/2}`.
pub const WEIGHT_BOUND_PREFACTOR: f64 = 3.44;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn k_minus_one() -> f64 {
    Jacobi::minus_one().quarter_period()
}

/// Mass gap `m_0 = π/(2K(−1)) (λ/2)^{1/4} μ`.
pub fn mass_gap(lambda: f64, mu: f64) -> Result<f64> {
    ensure_positive("lambda", lambda)?;
    ensure_positive("mu", mu)?;
    Ok(PI / (2.0 * k_minus_one()) * (lambda / 2.0).powf(0.25) * mu)
}

/// `m_n = (2n+1)·m_0`.
pub fn mass_n(n: usize, lambda: f64, mu: f64) -> Result<f64> {
    Ok((2 * n + 1) as f64 * mass_gap(lambda, mu)?)
}

/// Weight profile without the `π³/(4K³)` prefactor.
fn weight_profile(n: usize) -> f64 {
    let odd = (2 * n + 1) as f64;
    odd * odd * (-(n as f64 + 0.5) * PI).exp() / (1.0 + (-odd * PI).exp())
}

/// `π³/(4K³(−1))`.
pub fn weight_prefactor() -> f64 {
    PI.powi(3) / (4.0 * k_minus_one().powi(3))
}

/// Residue `B_n` of the propagator at `p² = m_n²`.
pub fn weight_n(n: usize) -> f64 {
    weight_prefactor() * weight_profile(n)
}

/// Upper bound on `Σ_{n > n_max} B_n`.
pub fn weight_tail_bound(n_max: usize) -> f64 {
    let bound = |n: usize| {
        let odd = (2 * n + 1) as f64;
        WEIGHT_BOUND_PREFACTOR * odd * odd * (-odd * PI / 2.0).exp()
    };
    compensated_sum((n_max + 1..n_max + 60).map(bound))
}

/// One Yukawa pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub n: usize,
    pub mass: f64,
    pub weight: f64,
}

/// Truncated spectrum `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSum {
    pub lines: Vec<SpectralLine>,
    pub n_max: usize,
    pub tail_bound: f64,
}

impl SpectralSum {
    pub fn new(lambda: f64, mu: f64, n_max: usize) -> Result<Self> {
        let m0 = mass_gap(lambda, mu)?;
        let pref = weight_prefactor();
        let lines = (0..=n_max)
            .map(|n| SpectralLine { n, mass: (2 * n + 1) as f64 * m0, weight: pref * weight_profile(n) })
            .collect();
        Ok(Self { lines, n_max, tail_bound: weight_tail_bound(n_max) })
    }

    /// `Σ B_n` over the retained lines.
    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.lines.iter().map(|l| l.weight))
    }

    /// `Σ B_n m_n²` over the retained lines.
    pub fn second_moment(&self) -> f64 {
        compensated_sum(self.lines.iter().map(|l| l.weight * l.mass * l.mass))
    }
}

/// Momentum-space propagator value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorValue {
    pub re: f64,
    pub im: f64,
    /// Bound on the dropped poles `n > n_max`.
    pub tail_bound: f64,
    /// Index of a pole within `epsilon` of `p²`, if any.
    pub near_pole: Option<usize>,
}

impl PropagatorValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `Σ_{n ≤ n_max} B_n / (p² − m_n² + iε)`.
pub fn propagator_momentum(p2: f64, lambda: f64, mu: f64, epsilon: f64, n_max: usize) -> Result<PropagatorValue> {
    ensure_finite("p^2", p2)?;
    ensure_positive("epsilon", epsilon)?;
    if n_max < 1 {
        return Err(crate::Error::Domain("n_max must be at least 1".into()));
    }
    let spectrum = SpectralSum::new(lambda, mu, n_max)?;
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    let mut near_pole = None;
    for line in &spectrum.lines {
        let d = p2 - line.mass * line.mass;
        if d.abs() < epsilon && near_pole.is_none() {
            near_pole = Some(line.n);
        }
        let term = line.weight / Complex64::new(d, epsilon);
        re.add(term.re);
        im.add(term.im);
    }
    let m_next = (2 * n_max + 3) as f64 * mass_gap(lambda, mu)?;
    let gap = (m_next * m_next - p2).abs().max(epsilon);
    Ok(PropagatorValue { re: re.value(), im: im.value(), tail_bound: spectrum.tail_bound / gap, near_pole })
}

/// Which time-ordered branch of the rest-frame kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Supported on `t > 0`.
    Retarded,
    /// Mirror image supported on `t < 0`.
    Advanced,
}

/// Rest-frame two-point kernel (spatial `δ³` factored out):
///
/// ```text
/// G(t) = −θ(t) / ((8λ)^{1/4} μ) · cn(ωt + χ') dn(ωt + χ'),   ω = (λ/2)^{1/4} μ
/// ```
///
/// with `χ'` a root of `cn(·, −1)` so that `G(0⁺) = 0` and `G'(0⁺) = 1`.
#[derive(Debug, Clone)]
pub struct RestFrameKernel {
    lambda: f64,
    mu: f64,
    phase: f64,
    omega: f64,
    prefactor: f64,
    amplitude: f64,
    jacobi: Jacobi,
}

impl RestFrameKernel {
    /// Kernel anchored at the `k`-th phase root.
    pub fn new(lambda: f64, mu: f64, k: i64) -> Result<Self> {
        Self::with_phase(lambda, mu, phase_root(k))
    }

    /// Kernel with an arbitrary phase (only phase roots give a Green's function).
    pub fn with_phase(lambda: f64, mu: f64, phase: f64) -> Result<Self> {
        ensure_positive("lambda", lambda)?;
        ensure_positive("mu", mu)?;
        ensure_finite("phase", phase)?;
        Ok(Self {
            lambda,
            mu,
            phase,
            omega: (lambda / 2.0).powf(0.25) * mu,
            prefactor: -1.0 / ((8.0 * lambda).powf(0.25) * mu),
            amplitude: mu * (2.0 / lambda).powf(0.25),
            jacobi: Jacobi::minus_one(),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn phase(&self) -> f64 {
        self.phase
    }
    /// Angular frequency `ω = (λ/2)^{1/4} μ` of the wave coordinate.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Period in `t`, `4K(−1)/ω`.
    pub fn period(&self) -> f64 {
        self.jacobi.period() / self.omega
    }

    /// The analytic `t > 0` expression continued to all `t`.
    pub fn continuation(&self, t: f64) -> f64 {
        let v = self.jacobi.eval(self.omega * t + self.phase);
        self.prefactor * v.cn * v.dn
    }

    pub fn retarded(&self, t: f64) -> f64 {
        if t > 0.0 {
            self.continuation(t)
        } else {
            0.0
        }
    }

    pub fn advanced(&self, t: f64) -> f64 {
        if t < 0.0 {
            self.continuation(-t)
        } else {
            0.0
        }
    }

    pub fn eval(&self, branch: Branch, t: f64) -> f64 {
        match branch {
            Branch::Retarded => self.retarded(t),
            Branch::Advanced => self.advanced(t),
        }
    }

    /// Background one-point function in the same frame and phase,
    /// `A sn(ωt + χ', −1)`.
    pub fn one_point(&self, t: f64) -> f64 {
        self.amplitude * self.jacobi.sn(self.omega * t + self.phase)
    }

    /// Analytic `dG/dt` of the continuation:
    /// `prefactor·ω·(−sn dn² + sn cn²)` at `m = −1`.
    pub fn continuation_derivative(&self, t: f64) -> f64 {
        let v = self.jacobi.eval(self.omega * t + self.phase);
        self.prefactor * self.omega * v.sn * (v.cn * v.cn - v.dn * v.dn)
    }

    /// Jump, continuity and homogeneous-ODE residual of one branch.
    pub fn greens_check(&self, branch: Branch) -> GreensCheck {
        let period = self.period();
        let h = period / 4096.0;
        // one-sided derivatives of the branch's smooth pieces at t = 0
        let (right, left, at_zero) = match branch {
            Branch::Retarded => {
                let d = one_sided_derivative(|t| self.continuation(t), 0.0, h);
                (d, 0.0, self.continuation(0.0))
            }
            Branch::Advanced => {
                let d = one_sided_derivative(|t| self.continuation(-t), 0.0, -h);
                (0.0, d, self.continuation(0.0))
            }
        };
        // both branches are the same smooth piece up to t -> -t, so the
        // homogeneous equation is checked on t > 0
        let fd_step = period / 2048.0;
        let samples = 400;
        let ode = (1..=samples)
            .map(|i| {
                let t = 2.0 * period * i as f64 / samples as f64;
                let bg = self.one_point(t);
                let g = |s: f64| self.continuation(s);
                (second_derivative(g, t, fd_step) + 3.0 * self.lambda * bg * bg * g(t)).abs()
            })
            .fold(0.0f64, f64::max);
        GreensCheck { jump: right - left, continuity: at_zero.abs(), ode_residual: ode }
    }
}

/// Numerical Green's-function witnesses for the rest-frame kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreensCheck {
    /// `G'(0⁺) − G'(0⁻)`; 1 for a unit source.
    pub jump: f64,
    /// `|G(0)|` of the branch at the source point.
    pub continuity: f64,
    /// Max `|G'' + 3λG₁²G|` away from the source over two periods.
    pub ode_residual: f64,
}

impl GreensCheck {
    pub fn jump_error(&self) -> f64 {
        (self.jump - 1.0).abs()
    }
}

/// `G(t)` of the retarded kernel at phase index `k`.
pub fn position_kernel_rest_frame(t: f64, lambda: f64, mu: f64, k: i64) -> Result<f64> {
    Ok(RestFrameKernel::new(lambda, mu, k)?.retarded(t))
}

/// Green's-function check of the retarded kernel at phase index `k`.
pub fn greens_jump_check(lambda: f64, mu: f64, k: i64) -> Result<GreensCheck> {
    Ok(RestFrameKernel::new(lambda, mu, k)?.greens_check(Branch::Retarded))
}

fn kappa0_term(n: usize) -> f64 {
    let odd = (2 * n + 1) as f64;
    odd.powi(4) * (-(n as f64 + 0.5) * PI).exp() / (1.0 + (-odd * PI).exp())
}

/// Partial sum of `κ₀` through `n_max` and a bound on the remainder.
pub fn kappa0_partial(n_max: usize) -> (f64, f64) {
    let value = compensated_sum((0..=n_max).map(kappa0_term));
    let tail = compensated_sum((n_max + 1..n_max + 80).map(|n| {
        let odd = (2 * n + 1) as f64;
        odd.powi(4) * (-odd * PI / 2.0).exp()
    }));
    (value, tail)
}

/// `κ₀ = Σ_n (2n+1)⁴ e^{−(n+½)π}/(1 + e^{−(2n+1)π})`, truncated once the tail
/// bound drops below 1e-16.
pub fn kappa0() -> f64 {
    let mut n_max = 10;
    loop {
        let (v, tail) = kappa0_partial(n_max);
        if tail < 1e-16 {
            return v;
        }
        n_max += 5;
    }
}

/// Pole / finite split of the dimensionally regularized `G₂(0)`.
///
/// The overall factor `i` of the Minkowski integral is kept as the flag
/// `imaginary_unit`; all coefficients are real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizationResult {
    /// Coefficient of `1/ε`: `Σ B_n m_n² / (16π²)`.
    pub pole_coefficient: f64,
    /// `Σ B_n m_n²/(16π²) · (−γ − ln(m_n²/(4π μ_R²)))`.
    pub finite_part: f64,
    pub scale_mu_r: f64,
    pub imaginary_unit: bool,
    /// Closed form `κ₀π³ λ^{1/2} μ²/(256 K⁵(−1))` as usually quoted.
    pub quoted_pole_coefficient: f64,
    /// `pole_coefficient / quoted_pole_coefficient`; equals `1/sqrt(2)`.
    pub quoted_ratio: f64,
    /// `m²·ε/(λ^{3/2}μ²)` implied by `m² = 3λ G₂(0)` with the resummed pole.
    pub mass_shift_coefficient: f64,
    /// The quoted `3π³κ₀/(256K⁵(−1))`.
    pub quoted_mass_shift_coefficient: f64,
}

/// Regularized coincident-point propagator.
pub fn dimreg_i2(lambda: f64, mu: f64, scale_mu_r: f64, n_max: usize) -> Result<RegularizationResult> {
    ensure_positive("renormalization scale", scale_mu_r)?;
    let spectrum = SpectralSum::new(lambda, mu, n_max)?;
    let norm = 16.0 * PI * PI;
    let pole = spectrum.second_moment() / norm;
    let finite = compensated_sum(spectrum.lines.iter().map(|l| {
        let m2 = l.mass * l.mass;
        l.weight * m2 / norm * (-EULER_GAMMA - (m2 / (4.0 * PI * scale_mu_r * scale_mu_r)).ln())
    }));
    let k5 = k_minus_one().powi(5);
    let k0 = kappa0();
    let quoted = k0 * PI.powi(3) * lambda.sqrt() * mu * mu / (256.0 * k5);
    Ok(RegularizationResult {
        pole_coefficient: pole,
        finite_part: finite,
        scale_mu_r,
        imaginary_unit: true,
        quoted_pole_coefficient: quoted,
        quoted_ratio: pole / quoted,
        mass_shift_coefficient: 3.0 * lambda * pole / (lambda.powf(1.5) * mu * mu),
        quoted_mass_shift_coefficient: 3.0 * PI.powi(3) * k0 / (256.0 * k5),
    })
}

/// `m² = 3λ G₂(0)`; negative values are passed through and flagged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassCorrection {
    pub msq: f64,
    pub negative: bool,
}

pub fn mass_correction(lambda: f64, g2_at_0: f64) -> MassCorrection {
    let msq = 3.0 * lambda * g2_at_0;
    MassCorrection { msq, negative: msq < 0.0 }
}
