//! Exact elliptic solutions of massless quartic scalar and Yang-Mills field
//! equations, their mass spectrum, Dyson-Schwinger residual checks and a
//! symplectic lattice cross-check.

pub mod cli;
pub mod config;
pub mod dyson_schwinger;
pub mod elliptic;
pub mod error;
pub mod fluctuation;
pub mod lattice;
pub mod numerics;
pub mod report;
pub mod selftest;
pub mod solutions;
pub mod spectral;

pub use error::{Error, Result};
