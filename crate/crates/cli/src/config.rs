//! Optional TOML file pinning defaults. Every key is optional; flags win.
//!
//! ```toml
//! delta = 0.001
//! cutoff_c = 1.0
//! primes = 10000
//! tol = 1e-8
//! seed = 20240101
//! sqrt_band_principal = 3.0
//! sqrt_band_non_principal = 5.0
//! variance_min = 0.52
//! variance_max = 0.64
//! mean_bound = 0.02
//! ```

use std::path::Path;

use anyhow::{Context, Result};
use euler_strip::euler::DEFAULT_CUTOFF_C;
use euler_strip::rwp::{MEAN_BOUND, SQRT_BAND_NON_PRINCIPAL, SQRT_BAND_PRINCIPAL, VARIANCE_WINDOW};
use euler_strip::zeros::{DEFAULT_DELTA, DEFAULT_PRIMES, DEFAULT_TOL};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 20_240_101;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub delta: Option<f64>,
    pub cutoff_c: Option<f64>,
    pub primes: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub sqrt_band_principal: Option<f64>,
    pub sqrt_band_non_principal: Option<f64>,
    pub variance_min: Option<f64>,
    pub variance_max: Option<f64>,
    pub mean_bound: Option<f64>,
}

/// Defaults after merging the config file over the built-in values.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub delta: f64,
    pub cutoff_c: f64,
    pub primes: usize,
    pub tol: f64,
    pub seed: u64,
    pub sqrt_band_principal: f64,
    pub sqrt_band_non_principal: f64,
    pub variance_min: f64,
    pub variance_max: f64,
    pub mean_bound: f64,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                toml::from_str::<ConfigFile>(&text).with_context(|| format!("parsing config {}", p.display()))?
            }
            None => ConfigFile::default(),
        };
        Ok(Settings {
            delta: file.delta.unwrap_or(DEFAULT_DELTA),
            cutoff_c: file.cutoff_c.unwrap_or(DEFAULT_CUTOFF_C),
            primes: file.primes.unwrap_or(DEFAULT_PRIMES),
            tol: file.tol.unwrap_or(DEFAULT_TOL),
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            sqrt_band_principal: file.sqrt_band_principal.unwrap_or(SQRT_BAND_PRINCIPAL),
            sqrt_band_non_principal: file.sqrt_band_non_principal.unwrap_or(SQRT_BAND_NON_PRINCIPAL),
            variance_min: file.variance_min.unwrap_or(VARIANCE_WINDOW.0),
            variance_max: file.variance_max.unwrap_or(VARIANCE_WINDOW.1),
            mean_bound: file.mean_bound.unwrap_or(MEAN_BOUND),
        })
    }
}
