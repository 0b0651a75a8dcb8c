//! Small numerical building blocks shared by the physics modules: compensated
//! summation, centered finite-difference stencils and composite Gauss-Legendre
//! quadrature.

use crate::error::{Error, Result};

/// Neumaier-compensated running sum. Summation order is the insertion order,
/// so results are reproducible bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Fourth-order centered second derivative:
/// `(-f(x+2h) + 16 f(x+h) - 30 f(x) + 16 f(x-h) - f(x-2h)) / (12 h^2)`.
pub fn second_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let f0 = f(x);
    let f1 = f(x + h) + f(x - h);
    let f2 = f(x + 2.0 * h) + f(x - 2.0 * h);
    (16.0 * f1 - f2 - 30.0 * f0) / (12.0 * h * h)
}

/// Fourth-order centered first derivative.
pub fn first_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

/// Fourth-order one-sided first derivative looking forward from `x`
/// (use a negative `h` to look backward).
pub fn one_sided_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2.0 * h) + 16.0 * f(x + 3.0 * h) - 3.0 * f(x + 4.0 * h)) / (12.0 * h)
}

pub(crate) fn check_step(h: f64, scale: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Numeric(format!("finite-difference step must be positive, got {h}")));
    }
    if h > scale / 8.0 {
        return Err(Error::Numeric(format!("finite-difference step {h} does not resolve the scale {scale}")));
    }
    Ok(())
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on P_n, started from the Chebyshev guess.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be at least 1");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Composite rule: `panels` equal panels on [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64, panels: usize) -> f64 {
        if b <= a || panels == 0 {
            return 0.0;
        }
        let width = (b - a) / panels as f64;
        let mut acc = CompensatedSum::new();
        for p in 0..panels {
            let lo = a + width * p as f64;
            let mid = lo + 0.5 * width;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                acc.add(w * f(mid + 0.5 * width * x));
            }
        }
        0.5 * width * acc.value()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
