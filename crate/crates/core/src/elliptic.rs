//! Jacobi elliptic functions and the complete elliptic integral of the first
//! kind, for real parameter `m < 1`, including negative parameters.
//!
//! **Convention.** The second argument is always the *parameter* `m`
//! (not the modulus `k = sqrt(m)`): `dn^2 = 1 - m sn^2` and
//!
//! ```text
//! K(m) = ∫₀^{π/2} dθ / sqrt(1 - m sin²θ)
//! ```
//!
//! The field solutions in this crate live at `m = -1`, where
//! `K(-1) = 1.3110287771460599...`.
//!
//! Negative parameters are mapped onto `m' = -m / (1 - m) ∈ (0, 1)` with the
//! real imaginary-modulus transformation
//!
//! ```text
//! sn(u | m) = sd(v | m') / sqrt(1 - m)
//! cn(u | m) = cd(v | m')
//! dn(u | m) = nd(v | m'),      v = u sqrt(1 - m)
//! K(m)      = K(m') / sqrt(1 - m)
//! ```
//!
//! so no complex arithmetic is needed anywhere. On `[0, 1)` the functions are
//! evaluated with the descending Landen / AGM scheme.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// AGM iteration cap.
const MAX_AGM_STEPS: usize = 64;
/// AGM convergence tolerance on `c_n / a_n`.
const AGM_TOL: f64 = 1e-15;

/// Elliptic parameter `m` with `dn² = 1 - m·sn²`; finite and below 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    /// The parameter used by every field solution in this crate.
    pub const MINUS_ONE: EllipticParameter = EllipticParameter(-1.0);

    pub fn new(m: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::Domain(format!("elliptic parameter must be finite, got {m}")));
        }
        if m >= 1.0 {
            return Err(Error::Domain(format!(
                "elliptic parameter must satisfy m < 1 for a real quarter period, got {m}"
            )));
        }
        Ok(Self(m))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `(sn, cn, dn)` at argument `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticValue {
    pub u: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Complete elliptic integral `K(m) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct QuarterPeriod(f64);

impl QuarterPeriod {
    pub fn value(self) -> f64 {
        self.0
    }

    /// Real period `4K` of `sn` and `cn`.
    pub fn period(self) -> f64 {
        4.0 * self.0
    }
}

/// `K(m)` for `m < 1`; domain error otherwise.
pub fn complete_k(m: f64) -> Result<QuarterPeriod> {
    let m = EllipticParameter::new(m)?;
    Ok(QuarterPeriod(quarter_period(m.value())))
}

fn quarter_period(m: f64) -> f64 {
    if m < 0.0 {
        let s = (1.0 - m).sqrt();
        agm_k(-m / (1.0 - m)) / s
    } else {
        agm_k(m)
    }
}

/// `K(m) = π / (2 AGM(1, sqrt(1 - m)))` for `0 <= m < 1`.
fn agm_k(m: f64) -> f64 {
    if m == 0.0 {
        return FRAC_PI_2;
    }
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..MAX_AGM_STEPS {
        let a_next = 0.5 * (a + b);
        let c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = a_next;
        if c.abs() <= AGM_TOL * a {
            break;
        }
    }
    FRAC_PI_2 / a
}

/// `sn, cn, dn` at `(u, m)`.
pub fn jacobi(u: f64, m: f64) -> Result<EllipticValue> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("elliptic argument must be finite, got {u}")));
    }
    Ok(Jacobi::new(EllipticParameter::new(m)?).eval(u))
}

/// Phase roots of `cn(·, -1)`: `(4k + 1) K(-1)`.
pub fn phase_root(k: i64) -> f64 {
    (4 * k + 1) as f64 * quarter_period(-1.0)
}

/// Evaluator with the parameter-dependent work (transformation, quarter
/// period, AGM ladder) done once. Use this in inner loops.
#[derive(Debug, Clone)]
pub struct Jacobi {
    m: f64,
    /// Parameter in [0, 1) actually fed to the AGM scheme.
    reduced: f64,
    /// `sqrt(1 - m)` for negative `m`, 1 otherwise.
    stretch: f64,
    reduced_quarter: f64,
    quarter: f64,
    ladder: AgmLadder,
}

#[derive(Debug, Clone)]
struct AgmLadder {
    a: [f64; MAX_AGM_STEPS + 1],
    c: [f64; MAX_AGM_STEPS + 1],
    steps: usize,
}

impl AgmLadder {
    fn new(m: f64) -> Self {
        let mut a = [0.0; MAX_AGM_STEPS + 1];
        let mut c = [0.0; MAX_AGM_STEPS + 1];
        a[0] = 1.0;
        c[0] = m.sqrt();
        let mut b = (1.0 - m).sqrt();
        let mut steps = 0;
        while steps < MAX_AGM_STEPS && c[steps].abs() > AGM_TOL * a[steps] {
            let an = a[steps];
            a[steps + 1] = 0.5 * (an + b);
            c[steps + 1] = 0.5 * (an - b);
            b = (an * b).sqrt();
            steps += 1;
        }
        Self { a, c, steps }
    }

    /// Amplitude φ = am(u | m) by descending recurrence.
    fn amplitude(&self, u: f64) -> f64 {
        let n = self.steps;
        let mut phi = (1u64 << n) as f64 * self.a[n] * u;
        for j in (1..=n).rev() {
            phi = 0.5 * (phi + (self.c[j] / self.a[j] * phi.sin()).asin());
        }
        phi
    }
}

impl Jacobi {
    pub fn new(m: EllipticParameter) -> Self {
        let m = m.value();
        let (reduced, stretch) = if m < 0.0 { (-m / (1.0 - m), (1.0 - m).sqrt()) } else { (m, 1.0) };
        let reduced_quarter = agm_k(reduced);
        Self {
            m,
            reduced,
            stretch,
            reduced_quarter,
            quarter: reduced_quarter / stretch,
            ladder: AgmLadder::new(reduced),
        }
    }

    /// Evaluator at `m = -1`.
    pub fn minus_one() -> Self {
        Self::new(EllipticParameter::MINUS_ONE)
    }

    pub fn parameter(&self) -> f64 {
        self.m
    }

    pub fn quarter_period(&self) -> f64 {
        self.quarter
    }

    pub fn period(&self) -> f64 {
        4.0 * self.quarter
    }

    pub fn eval(&self, u: f64) -> EllipticValue {
        let v = u * self.stretch;
        let (s, c, d) = self.reduced_eval(v);
        if self.m < 0.0 {
            EllipticValue { u, sn: s / (self.stretch * d), cn: c / d, dn: 1.0 / d }
        } else {
            EllipticValue { u, sn: s, cn: c, dn: d }
        }
    }

    pub fn sn(&self, u: f64) -> f64 {
        self.eval(u).sn
    }

    /// Evaluation at the reduced parameter in [0, 1), using oddness of sn and
    /// reduction of the argument to [-2K', 2K'].
    fn reduced_eval(&self, v: f64) -> (f64, f64, f64) {
        let period = 4.0 * self.reduced_quarter;
        let w = v - period * (v / period).round();
        let sign = if w < 0.0 { -1.0 } else { 1.0 };
        let phi = if self.reduced == 0.0 { w.abs() } else { self.ladder.amplitude(w.abs()) };
        let (s, c) = phi.sin_cos();
        let d = (1.0 - self.reduced * s * s).sqrt();
        (sign * s, c, d)
    }
}
