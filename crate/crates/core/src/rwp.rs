//! The random walk of the primes B_N(u; t, χ) = Σ cos(u(t log p_n − θ_n)),
//! ensembles over the scaling u, and the smooth large-N estimate.
//!
//! Sums run over contributing primes: primes dividing the modulus are skipped
//! and do not advance n.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::Primes;
use crate::summation::CompensatedSum;

/// Band for max |B_N|/√N with the trivial character below the cutoff.
pub const SQRT_BAND_PRINCIPAL: f64 = 3.0;
/// Band for max |B_N|/√N with a non-principal character.
pub const SQRT_BAND_NON_PRINCIPAL: f64 = 5.0;
/// Window for the ensemble variance of B_N/√N.
pub const VARIANCE_WINDOW: (f64, f64) = (0.52, 0.64);
/// Bound on the ensemble mean of B_N/√N.
pub const MEAN_BOUND: f64 = 0.02;

pub const HISTOGRAM_BINS: usize = 101;
pub const HISTOGRAM_RANGE: (f64, f64) = (-4.0, 4.0);

#[derive(Debug, Clone, Serialize)]
pub struct RwpTrace {
    pub t: f64,
    pub chi: DirichletCharacter,
    pub u: f64,
    pub degraded: bool,
    /// The contributing primes p_1..p_N.
    pub primes: Vec<u64>,
    /// b_n = cos(u(t log x_n − θ_n)) with x_n = p_n, or n log n when degraded.
    pub terms: Vec<f64>,
    /// B_n = Σ_{m≤n} b_m.
    pub partials: Vec<f64>,
}

impl RwpTrace {
    /// max_{n≤N} |B_n|/√n.
    pub fn max_sqrt_ratio(&self) -> f64 {
        self.partials
            .iter()
            .enumerate()
            .map(|(i, b)| b.abs() / ((i + 1) as f64).sqrt())
            .fold(0.0, f64::max)
    }
}

/// First `n` primes coprime to the modulus, with their phases θ.
fn contributing(chi: &DirichletCharacter, n: usize) -> (Vec<u64>, Vec<f64>) {
    let mut primes = Vec::with_capacity(n);
    let mut thetas = Vec::with_capacity(n);
    for p in Primes::new() {
        if primes.len() == n {
            break;
        }
        if let Some(phase) = chi.phase(p) {
            primes.push(p);
            thetas.push(phase.angle());
        }
    }
    (primes, thetas)
}

/// log x_n: log p_n, or log(n log n) for n ≥ 2 with x_1 = 2 in degraded mode.
fn log_abscissa(primes: &[u64], degraded: bool) -> Vec<f64> {
    primes
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if !degraded || i == 0 {
                (p as f64).ln()
            } else {
                let n = (i + 1) as f64;
                (n * n.ln()).ln()
            }
        })
        .collect()
}

/// λ_n = t log x_n − θ_n.
fn frequencies(t: f64, chi: &DirichletCharacter, n: usize, degraded: bool) -> (Vec<u64>, Vec<f64>) {
    let (primes, thetas) = contributing(chi, n);
    let logs = log_abscissa(&primes, degraded);
    let lambdas = logs.iter().zip(&thetas).map(|(l, th)| t * l - th).collect();
    (primes, lambdas)
}

pub fn rwp_series(t: f64, chi: &DirichletCharacter, n: usize, u: f64, degraded: bool) -> Result<RwpTrace> {
    if !t.is_finite() || !u.is_finite() {
        return Err(Error::Domain("t and u must be finite".into()));
    }
    let (primes, lambdas) = frequencies(t, chi, n, degraded);
    let terms: Vec<f64> = lambdas.iter().map(|l| (u * l).cos()).collect();
    let mut acc = CompensatedSum::new();
    let partials = terms
        .iter()
        .map(|&b| {
            acc.add(b);
            acc.value()
        })
        .collect();
    Ok(RwpTrace { t, chi: chi.clone(), u, degraded, primes, terms, partials })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    /// Values outside the range are counted in the end bins.
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(samples: &[f64]) -> Self {
        let (lo, hi) = HISTOGRAM_RANGE;
        let width = (hi - lo) / HISTOGRAM_BINS as f64;
        let edges = (0..=HISTOGRAM_BINS).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0u64; HISTOGRAM_BINS];
        for &x in samples {
            let k = ((x - lo) / width).floor();
            let k = if k.is_nan() { 0.0 } else { k.clamp(0.0, (HISTOGRAM_BINS - 1) as f64) };
            counts[k as usize] += 1;
        }
        Histogram { edges, counts }
    }

    /// Probability density per bin.
    pub fn density(&self) -> Vec<f64> {
        let total: u64 = self.counts.iter().sum();
        let width = self.edges[1] - self.edges[0];
        self.counts.iter().map(|&c| c as f64 / (total as f64 * width)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AndersonDarling {
    /// A*² = A²(1 + 0.75/n + 2.25/n²) with mean and variance estimated.
    pub statistic: f64,
    pub critical_1pct: f64,
    pub rejects_normality: bool,
}

/// Critical value of A*² at the 1% level for a normal with estimated parameters.
pub const AD_CRITICAL_1PCT: f64 = 1.035;

pub fn anderson_darling(samples: &[f64]) -> Result<AndersonDarling> {
    let n = samples.len();
    if n < 8 {
        return Err(Error::Domain(format!("Anderson–Darling needs at least 8 samples, got {n}")));
    }
    let (mean, var) = mean_variance(samples);
    if var <= 0.0 {
        return Ok(AndersonDarling { statistic: f64::INFINITY, critical_1pct: AD_CRITICAL_1PCT, rejects_normality: true });
    }
    let sd = var.sqrt();
    let mut z: Vec<f64> = samples.iter().map(|x| (x - mean) / sd).collect();
    z.sort_by(|a, b| a.total_cmp(b));
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let ln_cdf = |x: f64| normal.cdf(x).max(f64::MIN_POSITIVE).ln();
    let mut s = CompensatedSum::new();
    for i in 0..n {
        let w = (2 * i + 1) as f64;
        s.add(w * (ln_cdf(z[i]) + ln_cdf(-z[n - 1 - i])));
    }
    let nf = n as f64;
    let a2 = -nf - s.value() / nf;
    let statistic = a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf));
    Ok(AndersonDarling { statistic, critical_1pct: AD_CRITICAL_1PCT, rejects_normality: statistic > AD_CRITICAL_1PCT })
}

/// Mean and unbiased variance, with compensated sums in input order.
pub fn mean_variance(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().copied().collect::<CompensatedSum>().value() / n;
    let ss = samples.iter().map(|x| (x - mean) * (x - mean)).collect::<CompensatedSum>().value();
    let var = if samples.len() > 1 { ss / (n - 1.0) } else { 0.0 };
    (mean, var)
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleStats {
    #[serde(skip)]
    pub samples: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub histogram: Histogram,
    pub anderson_darling: Option<AndersonDarling>,
    pub seed: u64,
    pub ensemble_size: usize,
    pub n: usize,
    pub t: Option<f64>,
    pub degraded: bool,
}

impl EnsembleStats {
    fn from_samples(samples: Vec<f64>, seed: u64, n: usize, t: Option<f64>, degraded: bool) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain("ensemble size must be positive".into()));
        }
        let (mean, variance) = mean_variance(&samples);
        let histogram = Histogram::new(&samples);
        let anderson_darling = anderson_darling(&samples).ok();
        Ok(EnsembleStats {
            mean,
            variance,
            histogram,
            anderson_darling,
            seed,
            ensemble_size: samples.len(),
            n,
            t,
            degraded,
            samples,
        })
    }
}

/// Generator for sample `index` of an ensemble keyed by `seed`.
fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// R_N/√N with r_n uniform on [−1, 1].
pub fn uniform_walk(n: usize, e: usize, seed: u64) -> Result<EnsembleStats> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let samples: Vec<f64> = (0..e as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let mut acc = 0.0;
            for _ in 0..n {
                acc += rng.gen_range(-1.0..=1.0);
            }
            acc * scale
        })
        .collect();
    EnsembleStats::from_samples(samples, seed, n, None, false)
}

/// The scaling u_i ∈ [0, 2π) drawn for sample `index`.
pub fn ensemble_u(seed: u64, index: u64) -> f64 {
    sample_rng(seed, index).gen_range(0.0..2.0 * PI)
}

/// {B_N(u_i)/√N} with one u_i per sum.
pub fn prime_ensemble(
    t: f64,
    chi: &DirichletCharacter,
    n: usize,
    e: usize,
    seed: u64,
    degraded: bool,
) -> Result<EnsembleStats> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    if !t.is_finite() {
        return Err(Error::Domain("t must be finite".into()));
    }
    let (_, lambdas) = frequencies(t, chi, n, degraded);
    let scale = 1.0 / (lambdas.len() as f64).sqrt();
    let samples: Vec<f64> = (0..e as u64)
        .into_par_iter()
        .map(|i| {
            let u = ensemble_u(seed, i);
            lambdas.iter().map(|l| (u * l).cos()).sum::<f64>() * scale
        })
        .collect();
    EnsembleStats::from_samples(samples, seed, n, Some(t), degraded)
}

/// (p/log p) · t/(1+t²) · sin(t log p).
pub fn smooth_estimate_at(t: f64, p: u64) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::Domain("the smooth estimate vanishes identically at t = 0".into()));
    }
    if p < 2 {
        return Err(Error::Domain(format!("{p} is not a prime")));
    }
    let x = p as f64;
    let l = x.ln();
    Ok(x / l * t / (1.0 + t * t) * (t * l).sin())
}

/// The smooth estimate of B_N(t) at the Nth prime.
pub fn smooth_estimate(t: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let p = Primes::new().nth(n - 1).expect("prime stream is unbounded");
    smooth_estimate_at(t, p)
}

/// Outcome of the exhaustive multiplicative-independence check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub primes: usize,
    pub max_exponent: u32,
    pub vectors: u64,
    pub independent: bool,
}

/// Checks Σ n_k log p_k ≠ 0 for the first `count` primes and every nonzero
/// integer vector with |n_k| ≤ `max_exponent`.
///
/// Such a relation exists iff two distinct vectors in {0..max}^count give the
/// same product Π p_k^{e_k}, so the products are enumerated and tested for
/// injectivity. Products are compared modulo 2^64 first; a coincidence there
/// is settled by comparing logarithms.
pub fn log_primes_independent(count: usize, max_exponent: u32) -> Result<IndependenceReport> {
    let base = max_exponent as u64 + 1;
    let vectors = base
        .checked_pow(count as u32)
        .filter(|&v| v <= 1 << 26)
        .ok_or(Error::Resource { what: "exponent vectors", requested: u64::MAX, limit: 1 << 26 })?;
    let primes: Vec<u64> = Primes::new().take(count).collect();
    let mut keys: Vec<(u64, u64)> = Vec::with_capacity(vectors as usize);
    for code in 0..vectors {
        let mut c = code;
        let mut prod = 1u64;
        for &p in &primes {
            for _ in 0..c % base {
                prod = prod.wrapping_mul(p);
            }
            c /= base;
        }
        keys.push((prod, code));
    }
    keys.sort_unstable();
    let log_of = |code: u64| -> f64 {
        let mut c = code;
        let mut s = 0.0;
        for &p in &primes {
            s += (c % base) as f64 * (p as f64).ln();
            c /= base;
        }
        s
    };
    let independent = keys
        .windows(2)
        .all(|w| w[0].0 != w[1].0 || (log_of(w[0].1) - log_of(w[1].1)).abs() > 1e-9);
    Ok(IndependenceReport { primes: count, max_exponent, vectors, independent })
}
