//! G₃ and G₄ as time-axis convolutions of the rest-frame kernels.
//!
//! Arguments are absolute times; `g3_convolution(k, tx, ty, tz, _)` is
//! `G₃(x − y, x − z)`. The integration range is the intersection of the
//! kernels' supports, so coincident points give an empty range and an exact 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CompensatedSum, GaussLegendre};
use crate::spectral::{Branch, RestFrameKernel};

/// Kernels entering the convolutions.
pub trait RestFrameKernels {
    /// Coupling `λ` multiplying each vertex.
    fn coupling(&self) -> f64;
    /// Two-point kernel `G₂(τ)`.
    fn propagator(&self, tau: f64) -> f64;
    /// One-point function `G₁(t)`.
    fn one_point(&self, t: f64) -> f64;
    /// Open interval outside which `propagator` vanishes identically.
    fn support(&self) -> (f64, f64);
    /// Oscillation period, used to size quadrature panels.
    fn period(&self) -> f64;
}

/// The elliptic rest-frame kernel with its background one-point function.
#[derive(Debug, Clone)]
pub struct EllipticKernels {
    kernel: RestFrameKernel,
    branch: Branch,
}

impl EllipticKernels {
    /// Retarded kernel at phase root `k`.
    pub fn new(lambda: f64, mu: f64, k: i64) -> Result<Self> {
        Self::with_branch(lambda, mu, k, Branch::Retarded)
    }

    pub fn with_branch(lambda: f64, mu: f64, k: i64, branch: Branch) -> Result<Self> {
        Ok(Self { kernel: RestFrameKernel::new(lambda, mu, k)?, branch })
    }

    pub fn kernel(&self) -> &RestFrameKernel {
        &self.kernel
    }
}

impl RestFrameKernels for EllipticKernels {
    fn coupling(&self) -> f64 {
        self.kernel.lambda()
    }
    fn propagator(&self, tau: f64) -> f64 {
        self.kernel.eval(self.branch, tau)
    }
    fn one_point(&self, t: f64) -> f64 {
        self.kernel.one_point(t)
    }
    fn support(&self) -> (f64, f64) {
        match self.branch {
            Branch::Retarded => (0.0, f64::INFINITY),
            Branch::Advanced => (f64::NEG_INFINITY, 0.0),
        }
    }
    fn period(&self) -> f64 {
        self.kernel.period()
    }
}

/// Where the one-point factor inside the vertex integrals is evaluated.
///
/// `FirstLeg` attaches it to the first leg, `G₁(x₁ − y)` (and `G₁(x₁)` in the
/// middle G₄ term). `Vertex` uses `G₁(x₁)` throughout, which is what the
/// source term of the G₃ equation produces and is symmetric under `y ↔ z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Anchor {
    #[default]
    FirstLeg,
    Vertex,
}

/// Composite Gauss-Legendre settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub panels_per_period: usize,
    pub order: usize,
    pub anchor: Anchor,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { panels_per_period: 64, order: 8, anchor: Anchor::FirstLeg }
    }
}

impl QuadratureSpec {
    pub fn with_anchor(self, anchor: Anchor) -> Self {
        Self { anchor, ..self }
    }

    fn panel_width(&self, period: f64) -> Result<f64> {
        let step = period / self.panels_per_period.max(1) as f64;
        let limit = period / 32.0;
        if step > limit || !step.is_finite() || step <= 0.0 {
            return Err(Error::Underresolved { step, limit });
        }
        Ok(step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Interval(f64, f64);

impl Interval {
    fn meet(self, other: Interval) -> Interval {
        Interval(self.0.max(other.0), self.1.min(other.1))
    }

    fn is_empty(self) -> bool {
        !matches!(self.0.partial_cmp(&self.1), Some(std::cmp::Ordering::Less))
    }

    /// Times `s` with `a − s` inside the support.
    fn before(support: (f64, f64), a: f64) -> Interval {
        Interval(a - support.1, a - support.0)
    }

    /// Times `s` with `s − a` inside the support.
    fn after(support: (f64, f64), a: f64) -> Interval {
        Interval(a + support.0, a + support.1)
    }
}

/// Integrates `f` over `range`, splitting at interior breakpoints.
fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    range: Interval,
    breaks: &[f64],
    width: f64,
    rule: &GaussLegendre,
) -> Result<f64> {
    if range.is_empty() {
        return Ok(0.0);
    }
    if !range.0.is_finite() || !range.1.is_finite() {
        return Err(Error::Numeric(format!(
            "convolution range ({}, {}) is unbounded; kernel support must be one-sided or finite",
            range.0, range.1
        )));
    }
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&b| b > range.0 && b < range.1).collect();
    cuts.push(range.0);
    cuts.push(range.1);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut acc = CompensatedSum::new();
    for w in cuts.windows(2) {
        let panels = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
        acc.add(rule.integrate(&mut f, w[0], w[1], panels));
    }
    Ok(acc.value())
}

/// Range of `x₁` where the G₃ integrand can be nonzero.
fn g3_range<K: RestFrameKernels + ?Sized>(k: &K, tx: f64, ty: f64, tz: f64) -> Interval {
    let s = k.support();
    Interval::before(s, tx).meet(Interval::after(s, ty)).meet(Interval::after(s, tz))
}

fn g3_inner<K: RestFrameKernels + ?Sized>(
    k: &K,
    tx: f64,
    ty: f64,
    tz: f64,
    anchor: Anchor,
    width: f64,
    rule: &GaussLegendre,
) -> Result<f64> {
    let integrand = |t1: f64| {
        let g1 = match anchor {
            Anchor::FirstLeg => k.one_point(t1 - ty),
            Anchor::Vertex => k.one_point(t1),
        };
        k.propagator(tx - t1) * g1 * k.propagator(t1 - ty) * k.propagator(t1 - tz)
    };
    let v = integrate(integrand, g3_range(k, tx, ty, tz), &[tx, ty, tz], width, rule)?;
    Ok(-6.0 * k.coupling() * v)
}

/// `G₃(x − y, x − z) = −6λ∫dx₁ G₂(x − x₁) G₁ G₂(x₁ − y) G₂(x₁ − z)`.
pub fn g3_convolution<K: RestFrameKernels + ?Sized>(
    k: &K,
    tx: f64,
    ty: f64,
    tz: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let width = spec.panel_width(k.period())?;
    g3_inner(k, tx, ty, tz, spec.anchor, width, &GaussLegendre::new(spec.order))
}

/// Range of `x₁` where `G₃(x₁ − a, x₁ − b)` can be nonzero, and the kinks of
/// `x₁ ↦ G₃` inside it.
fn g3_outer_support<K: RestFrameKernels + ?Sized>(k: &K, a: f64, b: f64) -> (Interval, [f64; 2]) {
    let (lo, hi) = k.support();
    if (a - b).abs() >= hi - lo {
        return (Interval(0.0, 0.0), [f64::NAN; 2]);
    }
    (Interval(a.max(b) + 2.0 * lo, a.min(b) + 2.0 * hi), [a + lo + hi, b + lo + hi])
}

/// `G₄(x − y, x − z, x − w)`: the four-kernel term plus the three G₁G₂G₃
/// completion terms, with G₃ evaluated by nested quadrature.
pub fn g4_convolution<K: RestFrameKernels + ?Sized>(
    k: &K,
    tx: f64,
    ty: f64,
    tz: f64,
    tw: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let width = spec.panel_width(k.period())?;
    let rule = GaussLegendre::new(spec.order);
    let s = k.support();
    let lambda = k.coupling();
    let outer = Interval::before(s, tx);
    let args = [tx, ty, tz, tw];

    let quartic = integrate(
        |t1| k.propagator(tx - t1) * k.propagator(t1 - ty) * k.propagator(t1 - tz) * k.propagator(t1 - tw),
        outer.meet(Interval::after(s, ty)).meet(Interval::after(s, tz)).meet(Interval::after(s, tw)),
        &args,
        width,
        &rule,
    )?;

    // (G₂ leg, one-point anchor, G₃ pair)
    let anchored = |leg: f64| match spec.anchor {
        Anchor::FirstLeg => leg,
        Anchor::Vertex => 0.0,
    };
    let terms = [(ty, anchored(ty), (tz, tw)), (tz, 0.0, (ty, tw)), (tw, anchored(ty), (ty, tz))];
    let mut acc = CompensatedSum::new();
    acc.add(quartic);
    for (leg, shift, (a, b)) in terms {
        let (g3_support, kinks) = g3_outer_support(k, a, b);
        let range = outer.meet(Interval::after(s, leg)).meet(g3_support);
        let mut breaks = args.to_vec();
        breaks.extend(kinks.iter().filter(|v| v.is_finite()));
        let mut err = None;
        let v = integrate(
            |t1| {
                let g3 = g3_inner(k, t1, a, b, spec.anchor, width, &rule).unwrap_or_else(|e| {
                    err = Some(e);
                    f64::NAN
                });
                k.propagator(tx - t1) * k.one_point(t1 - shift) * k.propagator(t1 - leg) * g3
            },
            range,
            &breaks,
            width,
            &rule,
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        acc.add(v);
    }
    Ok(-6.0 * lambda * acc.value())
}

/// Why a coincident-point value is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// `G₂(τ)G₂(−τ) ≡ 0`: the kernel lives on one side of `τ = 0`.
    SupportDisjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OriginCheck {
    /// Quadrature value of `G₃(0, 0)`.
    pub value: f64,
    pub certificate: Option<Certificate>,
    /// Max of `|G₂(t − t₁)G₂(t₁ − t)|` over samples spanning four periods.
    pub sampled_max: f64,
}

/// `G₃(0, 0)` for the elliptic kernel at `(λ, μ)`.
pub fn g3_at_origin(lambda: f64, mu: f64) -> Result<OriginCheck> {
    g3_at_origin_with(&EllipticKernels::new(lambda, mu, 0)?, &QuadratureSpec::default())
}

/// `G₃(0, 0)` for any kernel set, with the support certificate when it
/// applies.
pub fn g3_at_origin_with<K: RestFrameKernels + ?Sized>(k: &K, spec: &QuadratureSpec) -> Result<OriginCheck> {
    let (lo, hi) = k.support();
    let certificate = (lo >= 0.0 || hi <= 0.0).then_some(Certificate::SupportDisjoint);
    let t = 0.0;
    let value = g3_convolution(k, t, t, t, spec)?;
    let period = k.period();
    let samples = 4096;
    let sampled_max = (0..=samples)
        .map(|i| {
            let t1 = t - 2.0 * period + 4.0 * period * i as f64 / samples as f64;
            (k.propagator(t - t1) * k.propagator(t1 - t)).abs()
        })
        .fold(0.0, f64::max);
    Ok(OriginCheck { value, certificate, sampled_max })
}
