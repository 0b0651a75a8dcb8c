//! Uniformly sampled probe-site time series with CSV I/O.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::report::fmt_f64;

/// Relative tolerance on sample-time uniformity when reading CSV.
const UNIFORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    t0: f64,
    sample_dt: f64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(t0: f64, sample_dt: f64, values: Vec<f64>) -> Result<Self> {
        ensure_finite("t0", t0)?;
        ensure_positive("sample_dt", sample_dt)?;
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("time series contains non-finite sample {v}")));
        }
        Ok(Self { t0, sample_dt, values })
    }

    /// Samples `f` at `n` times `t0 + i·dt`.
    pub fn sample<F: Fn(f64) -> f64>(f: F, t0: f64, sample_dt: f64, n: usize) -> Result<Self> {
        Self::new(t0, sample_dt, (0..n).map(|i| f(t0 + i as f64 * sample_dt)).collect())
    }

    pub fn sample_dt(&self) -> f64 {
        self.sample_dt
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.sample_dt
    }
    /// Record length `N·dt`.
    pub fn duration(&self) -> f64 {
        self.values.len() as f64 * self.sample_dt
    }

    /// Every `k`-th sample.
    pub fn decimate(&self, k: usize) -> Result<Self> {
        let k = k.max(1);
        Self::new(self.t0, self.sample_dt * k as f64, self.values.iter().step_by(k).copied().collect())
    }

    /// `(t, φ)` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.time(i), v))
    }

    /// CSV with header `t,phi`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(w);
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(["t", "phi"]).map_err(ser)?;
        for (t, v) in self.samples() {
            w.write_record([fmt_f64(t), fmt_f64(v)]).map_err(ser)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads `t,phi` CSV; sampling must be uniform.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::Serialization(e.to_string()))?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Serialization(format!("row {} has no column {i}", ts.len() + 1)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Serialization(format!("row {}: {e}", ts.len() + 1)))
            };
            let (t, v) = (field(0)?, field(1)?);
            ts.push(t);
            vs.push(v);
        }
        if ts.len() < 2 {
            return Err(Error::Domain("time series needs at least two samples".into()));
        }
        let dt = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
        for (i, &t) in ts.iter().enumerate() {
            let expected = ts[0] + i as f64 * dt;
            if (t - expected).abs() > UNIFORM_TOL * expected.abs().max(dt) {
                return Err(Error::Domain(format!("non-uniform sampling at row {}: t = {t}", i + 1)));
            }
        }
        Self::new(ts[0], dt, vs)
    }
}
