//! Machine-readable residual reports.
//!
//! JSON output is compact with a fixed field order and every float written
//! with 17 significant digits, so a report parses back to the identical value
//! and identical inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub seed: u64,
    pub grid: BTreeMap<String, f64>,
}

impl Default for Provenance {
    fn default() -> Self {
        Self { version: env!("CARGO_PKG_VERSION").to_string(), seed: 0, grid: BTreeMap::new() }
    }
}

/// Named residuals with tolerances; `pass` is true iff every check passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub schema: u32,
    pub command: String,
    pub params: BTreeMap<String, f64>,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
    pub provenance: Provenance,
}

impl ResidualReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.into(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            pass: true,
            provenance: Provenance::default(),
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn grid(mut self, name: &str, value: f64) -> Self {
        self.provenance.grid.insert(name.to_string(), value);
        self
    }

    /// Records `value <= tolerance`. NaN never passes.
    pub fn check(&mut self, name: impl Into<String>, value: f64, tolerance: f64) -> bool {
        let pass = value <= tolerance;
        self.checks.push(CheckResult { name: name.into(), value, tolerance, pass });
        self.pass &= pass;
        pass
    }

    /// Records a boolean condition as a 0/1 check.
    pub fn flag(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.check(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn merge(&mut self, other: ResidualReport) {
        for c in other.checks {
            self.pass &= c.pass;
            self.checks.push(c);
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json_string(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(["name", "value", "tolerance", "pass"]).map_err(ser)?;
        for c in &self.checks {
            w.write_record([c.name.clone(), fmt_f64(c.value), fmt_f64(c.tolerance), c.pass.to_string()])
                .map_err(ser)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.command, if self.pass { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {:<40} {:>12.4e}  (tol {:.1e})",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.value,
                c.tolerance
            )?;
        }
        Ok(())
    }
}

/// Float with 17 significant digits, the shortest width that always
/// round-trips an f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `serde_json` formatter writing floats with 17 significant digits.
#[derive(Debug, Default, Clone, Copy)]
pub struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize any value with [`SeventeenDigits`].
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser).map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(out).map_err(|e| Error::Serialization(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Domain(format!("unknown format '{other}', expected json or csv"))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Write `report` to `path` in the given format.
pub fn emit_report(report: &ResidualReport, format: Format, path: &Path) -> Result<()> {
    let body = match format {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => report.to_csv()?,
    };
    std::fs::write(path, body)?;
    Ok(())
}
