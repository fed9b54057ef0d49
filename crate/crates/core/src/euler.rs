//! Truncated Euler products 𝒫_N(s, χ), their first-order log series, the
//! cutoff N_c ∼ t², the Abel-transform bound and the prime-zeta continuation.
//!
//! Products are indexed by the position n of p_n among all primes. A prime
//! dividing the modulus contributes the factor 1, so P_n = P_{n−1} there.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::lfunc::{arg_continuous, zeta};
use crate::primes::{mobius, Primes};
use crate::rwp;
use crate::specfun::ComplexPoint;
use crate::summation::{CesaroMean, ComplexCompensatedSum, CompensatedSum};

pub use crate::summation::cesaro_average;

/// Default proportionality constant in N_c = ⌊c t²⌋.
pub const DEFAULT_CUTOFF_C: f64 = 1.0;

/// ⌊c t²⌋, saturating at `u64::MAX`.
pub fn cutoff(t: f64, c: f64) -> u64 {
    let v = (c * t * t).floor();
    if v.is_nan() || v <= 0.0 {
        0
    } else if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        v as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductOptions {
    pub cutoff_c: f64,
    /// Truncate at N_c for principal characters instead of only recording it.
    pub enforce_cutoff: bool,
}

impl Default for ProductOptions {
    fn default() -> Self {
        ProductOptions { cutoff_c: DEFAULT_CUTOFF_C, enforce_cutoff: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerProductTrace {
    pub s: ComplexPoint,
    pub chi: DirichletCharacter,
    /// P_1..P_N.
    pub partial_products: Vec<Complex64>,
    /// X_1..X_N with X_n = Σ_{m≤n} χ(p_m) p_m^{−s}.
    pub partial_log: Vec<Complex64>,
    /// ⟨P⟩_1..⟨P⟩_N.
    pub cesaro: Vec<Complex64>,
    pub n: usize,
    pub cutoff_n: Option<u64>,
}

impl EulerProductTrace {
    /// P_n with P_0 = 1.
    pub fn product(&self, n: usize) -> Complex64 {
        if n == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            self.partial_products[n - 1]
        }
    }
}

/// One row of a streamed product evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Checkpoint {
    pub n: u64,
    pub product: Complex64,
    pub cesaro: Complex64,
    pub log_product: Complex64,
}

fn validate(s: ComplexPoint, chi: &DirichletCharacter, opts: &ProductOptions) -> Result<Option<u64>> {
    if s.sigma <= 0.0 {
        return Err(Error::Domain(format!("σ = {} ≤ 0 makes some factor unbounded", s.sigma)));
    }
    if !chi.is_principal() {
        return Ok(None);
    }
    if s.t == 0.0 {
        if opts.enforce_cutoff && s.sigma <= 1.0 {
            return Err(Error::Divergence(format!(
                "principal character at real s = {} ≤ 1: the product diverges",
                s.sigma
            )));
        }
        return Ok(None);
    }
    Ok(Some(cutoff(s.t, opts.cutoff_c)))
}

/// −log(1 − x) and the first-order part x, for |x| < 1.
#[inline]
fn factor_log(x: Complex64) -> Complex64 {
    -(Complex64::new(1.0, 0.0) - x).ln()
}

/// χ(p) p^{−s}.
#[inline]
fn prime_term(chi: &DirichletCharacter, p: u64, s: Complex64) -> Complex64 {
    let c = chi.value(p);
    if c.re == 0.0 && c.im == 0.0 {
        return c;
    }
    c * (-s * (p as f64).ln()).exp()
}

/// Streams P_n over the first `n` primes and returns the rows at `checkpoints`
/// (ascending; values above the effective length are dropped). Memory stays
/// bounded, so this is the entry point for N in the 10^8 range.
pub fn product_checkpoints(
    s: ComplexPoint,
    chi: &DirichletCharacter,
    n: u64,
    checkpoints: &[u64],
    opts: &ProductOptions,
) -> Result<(Vec<Checkpoint>, Option<u64>)> {
    let cut = validate(s, chi, opts)?;
    let len = match cut {
        Some(c) if opts.enforce_cutoff => n.min(c),
        _ => n,
    };
    let out = stream_checkpoints(s, chi, Primes::new().take(len as usize), checkpoints, len);
    Ok((out, cut))
}

/// [`product_checkpoints`] over a caller-supplied prime list, so that sweeps
/// over many points share one sieve. The list must start at 2 and be
/// consecutive.
pub fn product_checkpoints_over(
    s: ComplexPoint,
    chi: &DirichletCharacter,
    primes: &[u64],
    checkpoints: &[u64],
    opts: &ProductOptions,
) -> Result<(Vec<Checkpoint>, Option<u64>)> {
    let cut = validate(s, chi, opts)?;
    let n = primes.len() as u64;
    let len = match cut {
        Some(c) if opts.enforce_cutoff => n.min(c),
        _ => n,
    };
    let out = stream_checkpoints(s, chi, primes.iter().copied().take(len as usize), checkpoints, len);
    Ok((out, cut))
}

fn stream_checkpoints(
    s: ComplexPoint,
    chi: &DirichletCharacter,
    primes: impl Iterator<Item = u64>,
    checkpoints: &[u64],
    len: u64,
) -> Vec<Checkpoint> {
    let z = s.to_complex();
    let mut marks: Vec<u64> = checkpoints.iter().copied().filter(|&c| c >= 1 && c <= len).collect();
    marks.sort_unstable();
    marks.dedup();
    let mut out = Vec::with_capacity(marks.len());
    let mut next = marks.iter().peekable();

    let mut log = ComplexCompensatedSum::new();
    let mut avg = CesaroMean::new();
    for (i, p) in primes.enumerate() {
        let x = prime_term(chi, p, z);
        if x.re != 0.0 || x.im != 0.0 {
            log.add(factor_log(x));
        }
        let lp = log.value();
        let prod = lp.exp();
        let mean = avg.push(prod);
        let idx = i as u64 + 1;
        if next.peek().is_some_and(|&&m| m == idx) {
            next.next();
            out.push(Checkpoint { n: idx, product: prod, cesaro: mean, log_product: lp });
        }
    }
    out
}

/// Full trace of P_n, X_n and ⟨P⟩_n for n ≤ N, using the default cutoff constant.
pub fn partial_product(
    s: ComplexPoint,
    chi: &DirichletCharacter,
    n: usize,
    enforce_cutoff: bool,
) -> Result<EulerProductTrace> {
    partial_product_with(s, chi, n, &ProductOptions { enforce_cutoff, ..Default::default() })
}

pub fn partial_product_with(
    s: ComplexPoint,
    chi: &DirichletCharacter,
    n: usize,
    opts: &ProductOptions,
) -> Result<EulerProductTrace> {
    let cut = validate(s, chi, opts)?;
    let len = match cut {
        Some(c) if opts.enforce_cutoff => n.min(c.min(usize::MAX as u64) as usize),
        _ => n,
    };
    let z = s.to_complex();
    let mut partial_products = Vec::with_capacity(len);
    let mut partial_log = Vec::with_capacity(len);
    let mut cesaro = Vec::with_capacity(len);
    let mut log = ComplexCompensatedSum::new();
    let mut first = ComplexCompensatedSum::new();
    let mut avg = CesaroMean::new();
    for p in Primes::new().take(len) {
        let x = prime_term(chi, p, z);
        if x.re != 0.0 || x.im != 0.0 {
            log.add(factor_log(x));
            first.add(x);
        }
        let prod = log.value().exp();
        partial_products.push(prod);
        partial_log.push(first.value());
        cesaro.push(avg.push(prod));
    }
    Ok(EulerProductTrace {
        s,
        chi: chi.clone(),
        partial_products,
        partial_log,
        cesaro,
        n: len,
        cutoff_n: cut,
    })
}

/// Σ_{m≥2} x^m/m = −log(1 − x) − x, summed directly when |x| is small.
fn higher_order(x: Complex64) -> Complex64 {
    let r = x.norm();
    if r > 0.25 {
        return factor_log(x) - x;
    }
    let mut pow = x * x;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut m = 2.0;
    loop {
        let term = pow / m;
        acc += term;
        if term.norm() <= 1e-17 * acc.norm() || m > 200.0 {
            break;
        }
        pow *= x;
        m += 1.0;
    }
    acc
}

/// (X_N, remainder) where X_N = Σ_{n≤N} χ(p_n) p_n^{−s} and the remainder
/// collects the m ≥ 2 terms of −log(1 − χ(p)p^{−s}), so that
/// X_N + remainder = log P_N.
pub fn log_series(s: ComplexPoint, chi: &DirichletCharacter, n: usize) -> (Complex64, Complex64) {
    let z = s.to_complex();
    let mut first = ComplexCompensatedSum::new();
    let mut rest = ComplexCompensatedSum::new();
    for p in Primes::new().take(n) {
        let x = prime_term(chi, p, z);
        if x.re == 0.0 && x.im == 0.0 {
            continue;
        }
        first.add(x);
        rest.add(higher_order(x));
    }
    (first.value(), rest.value())
}

/// Both sides of the Abel-transform bound on |Re X_N|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbelBound {
    /// |Σ a_n b_n| with a_n = p_n^{−σ}, b_n = cos(t log p_n − θ_n).
    pub lhs: f64,
    /// |a_N||B_N| + Σ_{n<N} |B_n||a_{n+1} − a_n| with the actual B_n.
    pub rhs: f64,
    /// |B_N|/(N log N)^σ + Σ_{2≤n<N} σ|B_n|/(n (n log n)^σ), the PNT-averaged form.
    pub pnt_averaged: f64,
}

/// Evaluates the Abel bound over the first `n` contributing primes.
pub fn abel_bound(s: ComplexPoint, chi: &DirichletCharacter, n: usize) -> Result<AbelBound> {
    if s.sigma <= 0.0 {
        return Err(Error::Domain(format!("σ = {} ≤ 0", s.sigma)));
    }
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let trace = rwp::rwp_series(s.t, chi, n, 1.0, false)?;
    let sigma = s.sigma;
    let a: Vec<f64> = trace.primes.iter().map(|&p| (p as f64).powf(-sigma)).collect();

    let lhs: CompensatedSum = a.iter().zip(&trace.terms).map(|(a, b)| a * b).collect();
    let mut rhs = CompensatedSum::new();
    rhs.add(a[n - 1] * trace.partials[n - 1].abs());
    for k in 0..n - 1 {
        rhs.add(trace.partials[k].abs() * (a[k + 1] - a[k]).abs());
    }

    let nn = n as f64;
    let mut pnt = CompensatedSum::new();
    if n >= 2 {
        pnt.add(trace.partials[n - 1].abs() / (nn * nn.ln()).powf(sigma));
    }
    for k in 2..n {
        let kf = k as f64;
        pnt.add(sigma * trace.partials[k - 1].abs() / (kf * (kf * kf.ln()).powf(sigma)));
    }
    Ok(AbelBound { lhs: lhs.value().abs(), rhs: rhs.value(), pnt_averaged: pnt.value() })
}

/// Distance from zero below which log ζ(ns) is treated as singular.
const PRIME_ZETA_SINGULAR: f64 = 1e-8;

/// log ζ(w) on the branch continuous from w = 2, for Re w > 1/2.
fn log_zeta_continuous(w: ComplexPoint) -> Result<Complex64> {
    let v = zeta(w)?.value;
    if v.norm() < PRIME_ZETA_SINGULAR {
        return Err(Error::Singularity(format!(
            "ζ({} + {}i) = {v} is within {PRIME_ZETA_SINGULAR:e} of zero",
            w.sigma, w.t
        )));
    }
    let arg = if w.sigma >= 2.0 {
        v.arg()
    } else {
        let tracked = arg_continuous(&DirichletCharacter::trivial(), w.t, w.sigma - 0.5, 0.05)?;
        // Snap the tracked value onto the accurate principal argument.
        let principal = v.arg();
        principal + 2.0 * PI * ((tracked - principal) / (2.0 * PI)).round()
    };
    Ok(Complex64::new(v.norm().ln(), arg))
}

/// The prime zeta function P(s) = Σ_{n≤M} μ(n)/n · log ζ(ns), for σ > 1/2.
pub fn prime_zeta_continuation(s: ComplexPoint, m: u64) -> Result<Complex64> {
    if s.sigma <= 0.5 {
        return Err(Error::Domain(format!("σ = {} ≤ 1/2", s.sigma)));
    }
    if m == 0 {
        return Err(Error::Domain("M must be positive".into()));
    }
    if s.sigma == 1.0 && s.t == 0.0 {
        return Err(Error::Pole { sigma: 1.0, t: 0.0 });
    }
    let mut acc = ComplexCompensatedSum::new();
    for k in 1..=m {
        let mu = mobius(k)?;
        if mu == 0 {
            continue;
        }
        let w = ComplexPoint { sigma: k as f64 * s.sigma, t: k as f64 * s.t };
        acc.add(log_zeta_continuous(w)? * (mu as f64 / k as f64));
    }
    Ok(acc.value())
}
