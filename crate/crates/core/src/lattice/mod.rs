//! Symplectic evolution of the classical field `φ_tt − φ_xx + λφ³ = 0` from
//! exact elliptic initial data.
//!
//! `dim = 0` is the rest-frame ODE at a single site; `dim = 1` is a periodic
//! 1+1D chain whose length is one wavelength of the travelling sn wave, so the
//! exact solution is compatible with the boundary.

mod series;
mod spectrum;

pub use series::TimeSeries;
pub use spectrum::{measure_mass_gap, power_at, GapMeasurement, MIN_PERIODS};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::numerics::CompensatedSum;
use crate::solutions::{dispersion_p2, FourMomentum, ScalarWaveSolution};

/// Blow-up threshold in units of the initial amplitude.
pub const BLOW_UP_FACTOR: f64 = 1e3;
/// Largest `dt / spacing` accepted in 1+1D.
pub const CFL_LIMIT: f64 = 0.5;
/// Default sites per wavelength in 1+1D.
pub const DEFAULT_SITES: usize = 512;
/// Default `dt / spacing` in 1+1D.
pub const DEFAULT_DT_FRAC: f64 = 0.25;
/// Default steps per period in the rest frame.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dim {
    /// Rest-frame ODE, a single site.
    Zero,
    /// 1+1D periodic chain.
    One,
}

impl Dim {
    pub fn from_int(d: u8) -> Result<Self> {
        match d {
            0 => Ok(Dim::Zero),
            1 => Ok(Dim::One),
            _ => Err(Error::Domain(format!("lattice dimension must be 0 or 1, got {d}"))),
        }
    }
}

/// Uniform periodic grid. In 1+1D the domain `n_sites · spacing` is one
/// wavelength of the travelling wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeGrid {
    pub dim: Dim,
    pub n_sites: usize,
    pub spacing: f64,
    pub dt: f64,
}

impl LatticeGrid {
    /// Rest-frame grid with `steps_per_period` steps per oscillation.
    pub fn rest_frame(lambda: f64, mu: f64, steps_per_period: usize) -> Result<Self> {
        if steps_per_period == 0 {
            return Err(Error::Domain("steps per period must be positive".into()));
        }
        let wave = ScalarWaveSolution::massless(lambda, mu)?;
        let period = wave.phase_period() / wave.momentum().p0;
        Ok(Self { dim: Dim::Zero, n_sites: 1, spacing: 1.0, dt: period / steps_per_period as f64 })
    }

    /// 1+1D grid for the wave with spatial momentum `p¹ = ω`, `ω` the
    /// rest-frame frequency. At this momentum the O(dt²) time error and the
    /// O(h²) lattice dispersion partly cancel.
    pub fn travelling(lambda: f64, mu: f64, sites: usize, dt_frac: f64) -> Result<Self> {
        if sites < 4 {
            return Err(Error::Domain(format!("need at least 4 sites, got {sites}")));
        }
        ensure_positive("dt_frac", dt_frac)?;
        let rest = ScalarWaveSolution::massless(lambda, mu)?;
        let p1 = rest.momentum().p0;
        let length = rest.phase_period() / p1;
        let spacing = length / sites as f64;
        let grid = Self { dim: Dim::One, n_sites: sites, spacing, dt: dt_frac * spacing };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("dt", self.dt)?;
        match self.dim {
            Dim::Zero if self.n_sites != 1 => {
                Err(Error::Domain(format!("rest-frame grid has exactly one site, got {}", self.n_sites)))
            }
            Dim::One => {
                ensure_positive("spacing", self.spacing)?;
                if self.n_sites < 4 {
                    return Err(Error::Domain(format!("need at least 4 sites, got {}", self.n_sites)));
                }
                let limit = CFL_LIMIT * self.spacing;
                if self.dt >= limit {
                    return Err(Error::Cfl { dt: self.dt, limit });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn length(&self) -> f64 {
        self.n_sites as f64 * self.spacing
    }

    pub fn position(&self, i: usize) -> f64 {
        i as f64 * self.spacing
    }

    /// The exact massless wave that fits this grid.
    pub fn exact_wave(&self, lambda: f64, mu: f64) -> Result<ScalarWaveSolution> {
        match self.dim {
            Dim::Zero => ScalarWaveSolution::massless(lambda, mu),
            Dim::One => {
                let rest = ScalarWaveSolution::massless(lambda, mu)?;
                let p1 = rest.phase_period() / self.length();
                let p2 = dispersion_p2(lambda, mu, 0.0)?;
                ScalarWaveSolution::with_momentum(lambda, mu, 0.0, 0.0, FourMomentum::on_shell(p2, [p1, 0.0, 0.0]))
            }
        }
    }
}

/// Field and conjugate momentum on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeState {
    pub t: f64,
    pub phi: Vec<f64>,
    pub pi: Vec<f64>,
}

impl LatticeState {
    pub fn zeros(n: usize) -> Self {
        Self { t: 0.0, phi: vec![0.0; n], pi: vec![0.0; n] }
    }

    /// Samples the exact wave and its time derivative at time `t`.
    pub fn from_wave(grid: &LatticeGrid, wave: &ScalarWaveSolution, t: f64) -> Self {
        let p0 = wave.momentum().p0;
        let jac = wave.jacobi();
        let (phi, pi) = (0..grid.n_sites)
            .map(|i| {
                let x = [t, grid.position(i), 0.0, 0.0];
                let v = jac.eval(wave.phase(&x));
                (wave.amplitude() * v.sn, wave.amplitude() * p0 * v.cn * v.dn)
            })
            .unzip();
        Self { t, phi, pi }
    }
}

/// Trapezoidal lattice energy `Σ h[½π² + ½(Δφ/h)² + λφ⁴/4]` (periodic, so the
/// trapezoid rule is a plain sum). In the rest frame `h = 1` and there is no
/// gradient term.
pub fn energy(grid: &LatticeGrid, state: &LatticeState, lambda: f64) -> f64 {
    let n = state.phi.len();
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        let phi = state.phi[i];
        let mut e = 0.5 * state.pi[i] * state.pi[i] + 0.25 * lambda * phi.powi(4);
        if grid.dim == Dim::One {
            let d = (state.phi[(i + 1) % n] - phi) / grid.spacing;
            e += 0.5 * d * d;
        }
        acc.add(e);
    }
    let h = if grid.dim == Dim::One { grid.spacing } else { 1.0 };
    h * acc.value()
}

/// Velocity-Verlet integrator; owns its state for the duration of a run.
#[derive(Debug, Clone)]
pub struct Integrator {
    grid: LatticeGrid,
    lambda: f64,
    state: LatticeState,
    force: Vec<f64>,
    blow_up: f64,
}

impl Integrator {
    /// `amplitude` sets the blow-up threshold `BLOW_UP_FACTOR · amplitude`.
    pub fn new(grid: LatticeGrid, lambda: f64, state: LatticeState, amplitude: f64) -> Result<Self> {
        grid.validate()?;
        ensure_positive("lambda", lambda)?;
        if state.phi.len() != grid.n_sites || state.pi.len() != grid.n_sites {
            return Err(Error::Domain(format!("state has {} sites, grid has {}", state.phi.len(), grid.n_sites)));
        }
        let mut me = Self { grid, lambda, state, force: vec![0.0; grid.n_sites], blow_up: 0.0 };
        me.blow_up = BLOW_UP_FACTOR * amplitude.abs().max(f64::MIN_POSITIVE);
        me.compute_force();
        Ok(me)
    }

    pub fn state(&self) -> &LatticeState {
        &self.state
    }

    pub fn into_state(self) -> LatticeState {
        self.state
    }

    pub fn energy(&self) -> f64 {
        energy(&self.grid, &self.state, self.lambda)
    }

    fn compute_force(&mut self) {
        let phi = &self.state.phi;
        let n = phi.len();
        let lambda = self.lambda;
        match self.grid.dim {
            Dim::Zero => self.force[0] = -lambda * phi[0].powi(3),
            Dim::One => {
                let inv_h2 = 1.0 / (self.grid.spacing * self.grid.spacing);
                for i in 0..n {
                    let left = phi[(i + n - 1) % n];
                    let right = phi[(i + 1) % n];
                    self.force[i] = (left - 2.0 * phi[i] + right) * inv_h2 - lambda * phi[i].powi(3);
                }
            }
        }
    }

    /// One kick-drift-kick step.
    pub fn step(&mut self) -> Result<()> {
        let dt = self.grid.dt;
        for (p, f) in self.state.pi.iter_mut().zip(&self.force) {
            *p += 0.5 * dt * f;
        }
        for (q, p) in self.state.phi.iter_mut().zip(&self.state.pi) {
            *q += dt * p;
        }
        self.compute_force();
        for (p, f) in self.state.pi.iter_mut().zip(&self.force) {
            *p += 0.5 * dt * f;
        }
        self.state.t += dt;
        let worst = self.state.phi.iter().fold(0.0f64, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v.abs()) });
        if worst > self.blow_up {
            return Err(Error::BlowUp { t: self.state.t, value: worst });
        }
        Ok(())
    }
}

/// Energy bookkeeping of a run, relative to the initial energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyStats {
    pub initial: f64,
    /// `max |E(t) − E(0)| / E(0)`, including the bounded O(dt²) oscillation
    /// of the modified Hamiltonian.
    pub max_fluctuation: f64,
    /// Secular drift: difference of the energy averaged over the last and the
    /// first oscillation period, relative to `E(0)`.
    pub drift: f64,
}

/// Result of [`evolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evolution {
    pub state: LatticeState,
    /// Field at site 0, every step.
    pub series: TimeSeries,
    pub energy: EnergyStats,
    /// L∞ error against the exact solution over all steps and sites.
    pub max_error: f64,
    pub steps: usize,
    pub period: f64,
}

/// Evolves the exact wave that fits `grid` to `t_final` (rounded to whole
/// steps).
pub fn evolve(grid: &LatticeGrid, lambda: f64, mu: f64, t_final: f64) -> Result<Evolution> {
    let wave = grid.exact_wave(lambda, mu)?;
    evolve_from(grid, &wave, LatticeState::from_wave(grid, &wave, 0.0), t_final)
}

/// Evolves arbitrary initial data, measuring the error against `reference`.
pub fn evolve_from(
    grid: &LatticeGrid,
    reference: &ScalarWaveSolution,
    initial: LatticeState,
    t_final: f64,
) -> Result<Evolution> {
    grid.validate()?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::Domain(format!("t_final must be finite and non-negative, got {t_final}")));
    }
    let lambda = reference.lambda();
    let period = reference.phase_period() / reference.momentum().p0;
    let steps = (t_final / grid.dt).round() as usize;
    let per_period = ((period / grid.dt).round() as usize).clamp(1, steps.max(1));
    let mut sim = Integrator::new(*grid, lambda, initial, reference.amplitude())?;

    let e0 = sim.energy();
    let mut energies = Vec::with_capacity(steps + 1);
    let mut series = Vec::with_capacity(steps + 1);
    let mut max_error = 0.0f64;
    let mut record = |sim: &Integrator, energies: &mut Vec<f64>, series: &mut Vec<f64>| {
        let s = sim.state();
        energies.push(sim.energy());
        series.push(s.phi[0]);
        for (i, &v) in s.phi.iter().enumerate() {
            let exact = reference.eval(&[s.t, grid.position(i), 0.0, 0.0]);
            max_error = max_error.max((v - exact).abs());
        }
    };
    record(&sim, &mut energies, &mut series);
    for _ in 0..steps {
        sim.step()?;
        record(&sim, &mut energies, &mut series);
    }

    let scale = if e0 != 0.0 { e0.abs() } else { 1.0 };
    let max_fluctuation = energies.iter().fold(0.0f64, |m, e| m.max((e - e0).abs())) / scale;
    let mean = |xs: &[f64]| xs.iter().copied().collect::<CompensatedSum>().value() / xs.len() as f64;
    let drift = if energies.len() > per_period {
        (mean(&energies[energies.len() - per_period..]) - mean(&energies[..per_period])).abs() / scale
    } else {
        0.0
    };
    Ok(Evolution {
        state: sim.into_state(),
        series: TimeSeries::new(0.0, grid.dt, series)?,
        energy: EnergyStats { initial: e0, max_fluctuation, drift },
        max_error,
        steps,
        period,
    })
}

/// Phase velocity of the travelling wave from the motion of an upward zero
/// crossing of φ(x) between two states a quarter period apart.
pub fn phase_velocity(grid: &LatticeGrid, lambda: f64, mu: f64) -> Result<(f64, f64)> {
    if grid.dim != Dim::One {
        return Err(Error::Domain("phase velocity needs a 1+1D grid".into()));
    }
    let wave = grid.exact_wave(lambda, mu)?;
    let p = wave.momentum();
    let period = wave.phase_period() / p.p0;
    let run = evolve_from(grid, &wave, LatticeState::from_wave(grid, &wave, 0.0), 0.25 * period)?;
    let x0 = downward_crossing(grid, &LatticeState::from_wave(grid, &wave, 0.0).phi)?;
    let x1 = downward_crossing(grid, &run.state.phi)?;
    let length = grid.length();
    let mut shift = x1 - x0;
    shift -= length * (shift / length).floor();
    let elapsed = run.steps as f64 * grid.dt;
    Ok((shift / elapsed, p.p0 / p.p1))
}

/// Position where φ(x) changes sign from positive to negative (φ decreases
/// in x for a right-moving `sn(p⁰t − p¹x)` at its upward time crossing),
/// linearly interpolated; sn has no curvature at its zeros.
fn downward_crossing(grid: &LatticeGrid, phi: &[f64]) -> Result<f64> {
    let n = phi.len();
    (0..n)
        .find(|&i| phi[i] > 0.0 && phi[(i + 1) % n] <= 0.0)
        .map(|i| {
            let (a, b) = (phi[i], phi[(i + 1) % n]);
            grid.position(i) + grid.spacing * a / (a - b)
        })
        .ok_or_else(|| Error::Numeric("no zero crossing in the field profile".into()))
}
