//! Zero counting with the prime-sum S_δ(t) and the nth-zero solver for
//! ϑ(t) + π S_δ(t) = (n − 3/2)π.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::euler::{cutoff, DEFAULT_CUTOFF_C};
use crate::specfun::{lambert_w, riemann_siegel_theta, theta_derivative};
use crate::summation::{CesaroMean, ComplexCompensatedSum};

pub const DEFAULT_DELTA: f64 = 1e-3;
pub const DEFAULT_PRIMES: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Bracket doublings before the solver gives up.
pub const MAX_BRACKET_EXPANSIONS: u32 = 8;
/// Newton steps are only tried once |F| falls below this.
const NEWTON_GATE: f64 = 0.1 * PI;
const MAX_SOLVER_ITERATIONS: u32 = 300;

/// Precomputed log p and χ(p) for a fixed list of primes.
#[derive(Debug, Clone)]
pub struct PrimeSum {
    logs: Vec<f64>,
    chi: Vec<Complex64>,
}

impl PrimeSum {
    /// `primes` must be the first primes in order; those dividing the modulus
    /// are kept in place with χ(p) = 0 so that N counts all primes.
    pub fn new(chi: &DirichletCharacter, primes: &[u64]) -> Self {
        PrimeSum {
            logs: primes.iter().map(|&p| (p as f64).ln()).collect(),
            chi: primes.iter().map(|&p| chi.value(p)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    fn check(&self, delta: f64, n: usize) -> Result<()> {
        if !(delta > 0.0) {
            return Err(Error::Domain(format!("δ must be positive, got {delta}")));
        }
        if n > self.len() {
            return Err(Error::Resource { what: "primes", requested: n as u64, limit: self.len() as u64 });
        }
        Ok(())
    }

    #[inline]
    fn term(&self, k: usize, t: f64, delta: f64) -> Option<Complex64> {
        let c = self.chi[k];
        if c.re == 0.0 && c.im == 0.0 {
            return None;
        }
        let l = self.logs[k];
        Some(c * Complex64::from_polar((-(0.5 + delta) * l).exp(), -t * l))
    }

    /// S_δ(t) over the first `n` primes.
    pub fn s_delta(&self, t: f64, delta: f64, n: usize) -> Result<f64> {
        self.check(delta, n)?;
        let mut acc = ComplexCompensatedSum::new();
        for k in 0..n {
            if let Some(x) = self.term(k, t, delta) {
                acc.add((Complex64::new(1.0, 0.0) - x).ln());
            }
        }
        Ok(-acc.value().im / PI)
    }

    /// S_δ(t) and dS_δ/dt over the first `n` primes.
    fn s_delta_with_slope(&self, t: f64, delta: f64, n: usize) -> (f64, f64) {
        let mut s = ComplexCompensatedSum::new();
        let mut slope = 0.0;
        for k in 0..n {
            if let Some(x) = self.term(k, t, delta) {
                let one_minus = Complex64::new(1.0, 0.0) - x;
                s.add(one_minus.ln());
                slope -= self.logs[k] * (x / one_minus).re;
            }
        }
        (-s.value().im / PI, slope / PI)
    }

    /// Mean of S_δ over the prefixes 1..=n.
    pub fn s_delta_cesaro(&self, t: f64, delta: f64, n: usize) -> Result<f64> {
        self.check(delta, n)?;
        if n == 0 {
            return Err(Error::Domain("Cesàro average of an empty sequence".into()));
        }
        let mut acc = ComplexCompensatedSum::new();
        let mut mean = CesaroMean::new();
        for k in 0..n {
            if let Some(x) = self.term(k, t, delta) {
                acc.add((Complex64::new(1.0, 0.0) - x).ln());
            }
            mean.push(Complex64::new(-acc.value().im / PI, 0.0));
        }
        Ok(mean.mean().re)
    }
}

/// −(1/π) Im Σ_{p ∈ primes, χ(p)≠0} log(1 − χ(p) p^{−1/2−δ−it}).
pub fn s_delta(t: f64, delta: f64, chi: &DirichletCharacter, primes: &[u64]) -> Result<f64> {
    PrimeSum::new(chi, primes).s_delta(t, delta, primes.len())
}

/// Cesàro mean of S_δ over prefixes of `primes`.
pub fn s_delta_cesaro(t: f64, delta: f64, chi: &DirichletCharacter, primes: &[u64]) -> Result<f64> {
    PrimeSum::new(chi, primes).s_delta_cesaro(t, delta, primes.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingPoint {
    #[serde(rename = "T")]
    pub t: f64,
    pub n_of_t: f64,
}

/// N_δ(T) = ϑ(T)/π + S_δ(T) + 1 with the trivial character.
pub fn counting_function(t: f64, delta: f64, primes: &[u64]) -> Result<CountingPoint> {
    let sum = PrimeSum::new(&DirichletCharacter::trivial(), primes);
    counting_with(&sum, t, delta, primes.len())
}

pub fn counting_with(sum: &PrimeSum, t: f64, delta: f64, n: usize) -> Result<CountingPoint> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("T must be positive and finite, got {t}")));
    }
    let s = sum.s_delta(t, delta, n)?;
    Ok(CountingPoint { t, n_of_t: riemann_siegel_theta(t) / PI + s + 1.0 })
}

/// t_n ≈ 2π(n − 11/8) / W((n − 11/8)/e).
pub fn lambert_approx(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("zero index starts at 1".into()));
    }
    let a = n as f64 - 11.0 / 8.0;
    Ok(2.0 * PI * a / lambert_w(a / E)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub delta: f64,
    /// Upper limit on the primes in the sum.
    pub primes: usize,
    /// Residual tolerance on |F|.
    pub tol: f64,
    /// Caps the primes at ⌊c t₀²⌋ around the initial guess t₀; `None` uses all.
    pub cutoff_c: Option<f64>,
    /// Replace S_δ by its Cesàro mean over prime prefixes.
    pub cesaro: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            delta: DEFAULT_DELTA,
            primes: DEFAULT_PRIMES,
            tol: DEFAULT_TOL,
            cutoff_c: Some(DEFAULT_CUTOFF_C),
            cesaro: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroResult {
    pub n: u64,
    pub t_n: f64,
    /// |ϑ(t_n) + π S_δ(t_n) − (n − 3/2)π|.
    pub residual: f64,
    pub iterations: u32,
    pub delta: f64,
    pub primes_used: usize,
}

struct Equation<'a> {
    sum: &'a PrimeSum,
    n_primes: usize,
    delta: f64,
    target: f64,
    cesaro: bool,
}

impl Equation<'_> {
    fn value(&self, t: f64) -> Result<f64> {
        let s = if self.cesaro {
            self.sum.s_delta_cesaro(t, self.delta, self.n_primes)?
        } else {
            self.sum.s_delta(t, self.delta, self.n_primes)?
        };
        Ok(riemann_siegel_theta(t) + PI * s - self.target)
    }

    fn value_and_slope(&self, t: f64) -> Result<(f64, Option<f64>)> {
        if self.cesaro {
            return Ok((self.value(t)?, None));
        }
        let (s, ds) = self.sum.s_delta_with_slope(t, self.delta, self.n_primes);
        Ok((riemann_siegel_theta(t) + PI * s - self.target, Some(theta_derivative(t) + PI * ds)))
    }
}

/// Solves for the nth zero ordinate with a precomputed trivial-character sum.
pub fn solve_zero_with(n: u64, opts: &SolverOptions, sum: &PrimeSum) -> Result<ZeroResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if opts.primes == 0 {
        return Err(Error::Domain("at least one prime is required".into()));
    }
    let t0 = lambert_approx(n)?;
    let mut n_primes = opts.primes.min(sum.len());
    if let Some(c) = opts.cutoff_c {
        n_primes = n_primes.min(cutoff(t0, c).max(1).min(usize::MAX as u64) as usize);
    }
    sum.check(opts.delta, n_primes)?;
    let eq = Equation { sum, n_primes, delta: opts.delta, target: (n as f64 - 1.5) * PI, cesaro: opts.cesaro };

    let mut half = PI / (n.max(3) as f64).ln();
    let (mut lo, mut hi, mut f_lo, mut f_hi);
    let mut expansions = 0;
    loop {
        lo = (t0 - half).max(f64::MIN_POSITIVE);
        hi = t0 + half;
        f_lo = eq.value(lo)?;
        f_hi = eq.value(hi)?;
        if f_lo.signum() != f_hi.signum() || f_lo == 0.0 || f_hi == 0.0 {
            break;
        }
        if expansions == MAX_BRACKET_EXPANSIONS {
            return Err(Error::Bracketing { lo, hi, f_lo, f_hi });
        }
        half *= 2.0;
        expansions += 1;
    }
    if f_lo == 0.0 || f_hi == 0.0 {
        let t_n = if f_lo == 0.0 { lo } else { hi };
        return Ok(ZeroResult { n, t_n, residual: 0.0, iterations: 0, delta: opts.delta, primes_used: n_primes });
    }

    let rising = f_hi > 0.0;
    let mut x = 0.5 * (lo + hi);
    let mut fx;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let (f, slope) = eq.value_and_slope(x)?;
        fx = f;
        if fx.abs() <= opts.tol || iterations >= MAX_SOLVER_ITERATIONS {
            break;
        }
        if (fx > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
        let newton = match slope {
            Some(d) if fx.abs() < NEWTON_GATE && d != 0.0 => Some(x - fx / d),
            _ => None,
        };
        x = match newton {
            Some(y) if y > lo && y < hi => y,
            _ => 0.5 * (lo + hi),
        };
    }
    Ok(ZeroResult { n, t_n: x, residual: fx.abs(), iterations, delta: opts.delta, primes_used: n_primes })
}

/// Solves for the nth zero, taking the first `opts.primes` primes.
pub fn solve_zero(n: u64, opts: &SolverOptions) -> Result<ZeroResult> {
    let primes: Vec<u64> = crate::primes::Primes::new().take(opts.primes).collect();
    solve_zero_with(n, opts, &PrimeSum::new(&DirichletCharacter::trivial(), &primes))
}

/// Solves n = from..=to concurrently and checks that the ordinates increase.
pub fn solve_zeros(from: u64, to: u64, opts: &SolverOptions) -> Result<Vec<ZeroResult>> {
    if from == 0 || to < from {
        return Err(Error::Domain(format!("invalid index range {from}..={to}")));
    }
    let primes: Vec<u64> = crate::primes::Primes::new().take(opts.primes).collect();
    let sum = PrimeSum::new(&DirichletCharacter::trivial(), &primes);
    let out: Vec<ZeroResult> =
        (from..=to).into_par_iter().map(|n| solve_zero_with(n, opts, &sum)).collect::<Result<_>>()?;
    if let Some(w) = out.windows(2).find(|w| w[1].t_n <= w[0].t_n) {
        return Err(Error::Domain(format!(
            "solutions not increasing: t_{} = {} ≥ t_{} = {}",
            w[0].n, w[0].t_n, w[1].n, w[1].t_n
        )));
    }
    Ok(out)
}
