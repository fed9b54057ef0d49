//! Compensated summation and Cesàro (running arithmetic-mean) averages.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexCompensatedSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexCompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Streaming Cesàro mean: after n pushes, `mean()` is the average of all n values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CesaroMean {
    sum: ComplexCompensatedSum,
    count: u64,
}

impl CesaroMean {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, z: Complex64) -> Complex64 {
        self.sum.add(z);
        self.count += 1;
        self.mean()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Zero before the first push.
    #[inline]
    pub fn mean(&self) -> Complex64 {
        if self.count == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.sum.value() / self.count as f64
    }
}

/// Running averages ⟨a⟩_n = (1/n) Σ_{m≤n} a_m for every prefix.
pub fn cesaro_average(seq: &[Complex64]) -> Result<Vec<Complex64>> {
    if seq.is_empty() {
        return Err(Error::Domain("Cesàro average of an empty sequence".into()));
    }
    let mut acc = CesaroMean::new();
    Ok(seq.iter().map(|&z| acc.push(z)).collect())
}

/// Real-valued running averages.
pub fn cesaro_average_real(seq: &[f64]) -> Result<Vec<f64>> {
    if seq.is_empty() {
        return Err(Error::Domain("Cesàro average of an empty sequence".into()));
    }
    let mut acc = CompensatedSum::new();
    Ok(seq
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            acc.add(x);
            acc.value() / (i + 1) as f64
        })
        .collect())
}
