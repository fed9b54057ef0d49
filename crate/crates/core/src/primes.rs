//! Prime generation.
//!
//! [`Primes`] is an unbounded segmented sieve of Eratosthenes over the odd
//! numbers; its working set is one segment plus the base primes up to the
//! square root of the current segment end, so streaming 10^8 primes stays
//! within a few megabytes. [`PrimeTable`] materializes a prefix of that
//! stream together with the consecutive gaps.

use crate::error::{Error, Result};

/// Odd numbers covered by one sieve segment.
const SEGMENT_ODDS: usize = 1 << 17;

/// Upper limit on the number of primes a [`PrimeTable`] may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeBudget {
    pub max_count: usize,
}

impl Default for PrimeBudget {
    fn default() -> Self {
        // 3·10^8 primes need 2.4 GB as u64; anything above that should stream.
        PrimeBudget {
            max_count: 300_000_000,
        }
    }
}

/// Odd primes below `limit` by a plain sieve, used as sieving primes.
fn odd_primes_below(limit: u64) -> Vec<u64> {
    if limit < 4 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    let mut i = 3;
    while i < n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Streaming segmented sieve yielding 2, 3, 5, 7, ... without end.
#[derive(Debug, Clone)]
pub struct Primes {
    emitted_two: bool,
    base: Vec<u64>,
    base_limit: u64,
    seg_start: u64,
    composite: Vec<bool>,
    idx: usize,
}

impl Primes {
    pub fn new() -> Self {
        Primes {
            emitted_two: false,
            base: Vec::new(),
            base_limit: 0,
            // Segment 0 is filled lazily, starting at 3.
            seg_start: 3u64.wrapping_sub(2 * SEGMENT_ODDS as u64),
            composite: Vec::new(),
            idx: 0,
        }
    }

    fn next_segment(&mut self) {
        self.seg_start = self.seg_start.wrapping_add(2 * SEGMENT_ODDS as u64);
        let seg_end = self.seg_start + 2 * SEGMENT_ODDS as u64;
        let root = (seg_end as f64).sqrt() as u64 + 2;
        if root > self.base_limit {
            self.base_limit = (2 * root).max(1 << 12);
            self.base = odd_primes_below(self.base_limit);
        }

        self.composite.clear();
        self.composite.resize(SEGMENT_ODDS, false);
        for &p in &self.base {
            let sq = p * p;
            if sq >= seg_end {
                break;
            }
            let mut m = if sq >= self.seg_start {
                sq
            } else {
                self.seg_start.div_ceil(p) * p
            };
            if m % 2 == 0 {
                m += p;
            }
            let mut i = ((m - self.seg_start) / 2) as usize;
            let step = p as usize;
            while i < SEGMENT_ODDS {
                self.composite[i] = true;
                i += step;
            }
        }
        self.idx = 0;
    }
}

impl Default for Primes {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if !self.emitted_two {
            self.emitted_two = true;
            return Some(2);
        }
        loop {
            while self.idx < self.composite.len() {
                let i = self.idx;
                self.idx += 1;
                if !self.composite[i] {
                    return Some(self.seg_start + 2 * i as u64);
                }
            }
            self.next_segment();
        }
    }
}

/// The first N primes in ascending order with their consecutive gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    primes: Vec<u64>,
    gaps: Vec<u32>,
}

impl PrimeTable {
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `gaps()[i] = primes()[i + 1] - primes()[i]`; one shorter than the table.
    pub fn gaps(&self) -> &[u32] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The n-th prime, 1-based.
    pub fn nth(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }

    pub fn last(&self) -> Option<u64> {
        self.primes.last().copied()
    }

    /// Mean of the gaps g_1..g_{N-1}.
    pub fn mean_gap(&self) -> Option<f64> {
        if self.gaps.is_empty() {
            return None;
        }
        let total: u64 = self.gaps.iter().map(|&g| u64::from(g)).sum();
        Some(total as f64 / self.gaps.len() as f64)
    }

    /// Table of the first `count` entries; panics if `count > len()`.
    pub fn prefix(&self, count: usize) -> PrimeTable {
        PrimeTable {
            primes: self.primes[..count].to_vec(),
            gaps: self.gaps[..count.saturating_sub(1)].to_vec(),
        }
    }
}

/// First `count` primes under the default budget.
pub fn generate_primes(count: usize) -> Result<PrimeTable> {
    generate_primes_with_budget(count, PrimeBudget::default())
}

pub fn generate_primes_with_budget(count: usize, budget: PrimeBudget) -> Result<PrimeTable> {
    if count == 0 {
        return Err(Error::Domain("prime count must be at least 1".into()));
    }
    if count > budget.max_count {
        return Err(Error::Resource {
            what: "primes",
            requested: count as u64,
            limit: budget.max_count as u64,
        });
    }
    let primes: Vec<u64> = Primes::new().take(count).collect();
    let gaps = primes.windows(2).map(|w| (w[1] - w[0]) as u32).collect();
    Ok(PrimeTable { primes, gaps })
}

/// Möbius function by trial division.
pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::Domain("mobius is undefined at 0".into()));
    }
    let mut m = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// μ(0..=limit) by a linear sieve; entry 0 is 0.
pub fn mobius_table(limit: usize) -> Vec<i8> {
    let mut mu = vec![0i8; limit + 1];
    if limit == 0 {
        return mu;
    }
    mu[1] = 1;
    let mut is_composite = vec![false; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=limit {
        if !is_composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > limit {
                break;
            }
            is_composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}
