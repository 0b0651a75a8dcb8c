//! Run configuration: a `key = value` file, overridden by `MASSGAP_OUT`, then
//! by command-line flags.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::Format;

/// Environment variable naming the output directory.
pub const OUT_ENV: &str = "MASSGAP_OUT";

/// Every field is optional so layers can be merged; commands apply their own
/// defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub lambda: Option<f64>,
    pub g: Option<f64>,
    pub n_color: Option<u32>,
    pub mu: Option<f64>,
    pub alpha: Option<f64>,
    pub nmax: Option<usize>,
    pub points: Option<usize>,
    pub periods: Option<f64>,
    pub h: Option<f64>,
    pub sites: Option<usize>,
    pub dt_frac: Option<f64>,
    pub tolerance: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Coupling mode: scalar `λ` or Yang-Mills `(g, N)` with `λ = Ng²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    Scalar { lambda: f64 },
    YangMills { g: f64, n_color: u32 },
}

impl Coupling {
    pub fn lambda(&self) -> f64 {
        match *self {
            Coupling::Scalar { lambda } => lambda,
            Coupling::YangMills { g, n_color } => n_color as f64 * g * g,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| Error::Domain(format!("config line {line}: bad value '{value}' for {key}")))
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let n = i + 1;
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::Domain(format!("config line {n}: expected key = value")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "lambda" => c.lambda = Some(parse_value(key, value, n)?),
                "g" => c.g = Some(parse_value(key, value, n)?),
                "N" => c.n_color = Some(parse_value(key, value, n)?),
                "mu" => c.mu = Some(parse_value(key, value, n)?),
                "alpha" => c.alpha = Some(parse_value(key, value, n)?),
                "nmax" => c.nmax = Some(parse_value(key, value, n)?),
                "points" => c.points = Some(parse_value(key, value, n)?),
                "periods" => c.periods = Some(parse_value(key, value, n)?),
                "h" => c.h = Some(parse_value(key, value, n)?),
                "sites" => c.sites = Some(parse_value(key, value, n)?),
                "dt_frac" => c.dt_frac = Some(parse_value(key, value, n)?),
                "tolerance" => c.tolerance = Some(parse_value(key, value, n)?),
                "output_dir" => c.output_dir = Some(PathBuf::from(value)),
                "format" => c.format = Some(value.parse()?),
                other => return Err(Error::Domain(format!("config line {n}: unknown key '{other}'"))),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Layer holding only the output directory from `MASSGAP_OUT`.
    pub fn from_env() -> Self {
        RunConfig { output_dir: std::env::var_os(OUT_ENV).map(PathBuf::from), ..Default::default() }
    }

    /// `self` with every field set in `top` replaced.
    pub fn overlay(self, top: RunConfig) -> Self {
        RunConfig {
            lambda: top.lambda.or(self.lambda),
            g: top.g.or(self.g),
            n_color: top.n_color.or(self.n_color),
            mu: top.mu.or(self.mu),
            alpha: top.alpha.or(self.alpha),
            nmax: top.nmax.or(self.nmax),
            points: top.points.or(self.points),
            periods: top.periods.or(self.periods),
            h: top.h.or(self.h),
            sites: top.sites.or(self.sites),
            dt_frac: top.dt_frac.or(self.dt_frac),
            tolerance: top.tolerance.or(self.tolerance),
            output_dir: top.output_dir.or(self.output_dir),
            format: top.format.or(self.format),
        }
    }

    /// Exactly one of `lambda` or `(g, N)` must be present.
    pub fn coupling(&self) -> Result<Coupling> {
        match (self.lambda, self.g, self.n_color) {
            (Some(lambda), None, None) => Ok(Coupling::Scalar { lambda }),
            (None, Some(g), Some(n_color)) => Ok(Coupling::YangMills { g, n_color }),
            (None, None, None) => Err(Error::Domain("supply either --lambda or both --g and --N".into())),
            (None, _, _) => Err(Error::Domain("Yang-Mills mode needs both --g and --N".into())),
            (Some(_), _, _) => Err(Error::Domain("supply either --lambda or (--g, --N), not both".into())),
        }
    }

    pub fn mu_or_default(&self) -> f64 {
        self.mu.unwrap_or(1.0)
    }

    /// Tolerances and grid controls must be positive.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tolerance", self.tolerance),
            ("periods", self.periods),
            ("h", self.h),
            ("dt_frac", self.dt_frac),
            ("mu", self.mu),
            ("alpha", self.alpha),
        ];
        for (name, v) in positive {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Domain(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if self.points == Some(0) || self.sites == Some(0) || self.n_color == Some(0) {
            return Err(Error::Domain("points, sites and N must be positive".into()));
        }
        Ok(())
    }
}
