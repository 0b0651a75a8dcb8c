use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dispersion relation violated: p^2 = {actual}, expected {expected}")]
    Dispersion { actual: f64, expected: f64 },

    #[error("no real diagonal ansatz: {component}^2 = {value}")]
    NoRealAnsatz { component: char, value: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("CFL bound violated: dt = {dt} must be below 0.5 * spacing = {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("field blow-up at t = {t}: |phi| = {value}")]
    BlowUp { t: f64, value: f64 },

    #[error("time series too short: spans {periods:.2} periods, need at least {required}")]
    SeriesTooShort { periods: f64, required: f64 },

    #[error("quadrature under-resolved: panel width {step} exceeds {limit}")]
    Underresolved { step: f64, limit: f64 },

    #[error("pole at p^2 = 0")]
    MasslessPole,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {value}")))
    }
}
