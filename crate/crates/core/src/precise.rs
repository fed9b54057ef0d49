//! Just enough double-double arithmetic to evaluate n^{-it} for |t| up to
//! ~10^4 without the phase error of a binary64 `t * ln(n)` (which is already
//! ~10^-11 radians there).

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q = self.hi / b;
        let (p, e) = two_prod(q, b);
        let r = ((self.hi - p) - e + self.lo) / b;
        let (hi, lo) = quick_two_sum(q, r);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul_f64(-q1));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul_f64(-q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }
}

const LN2: Dd = Dd::new(std::f64::consts::LN_2, 2.319_046_813_846_299_6e-17);
const TWO_PI: Dd = Dd::new(std::f64::consts::TAU, 2.449_293_598_294_706_4e-16);

/// ln x for a positive finite x, to about 1e-31 relative.
pub(crate) fn ln_dd(x: f64) -> Dd {
    debug_assert!(x > 0.0 && x.is_finite());
    // x = m · 2^e with m ∈ [1/√2, √2)
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let (mut m, mut e) = if raw_exp == 0 {
        // subnormal: rescale
        let y = x * 2f64.powi(54);
        let b = y.to_bits();
        let re = ((b >> 52) & 0x7ff) as i64;
        (f64::from_bits((b & !(0x7ff << 52)) | (1023 << 52)), re - 1023 - 54)
    } else {
        (f64::from_bits((bits & !(0x7ff << 52)) | (1023 << 52)), raw_exp - 1023)
    };
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1;
    }
    // ln m = 2 atanh z, z = (m − 1)/(m + 1)
    let num = Dd::from_f64(m - 1.0);
    let (s, se) = two_sum(m, 1.0);
    let z = num.div(Dd::new(s, se));
    let z2 = z.mul(z);
    let mut term = z;
    let mut acc = z;
    for k in 1..40 {
        term = term.mul(z2);
        if term.hi.abs() < 1e-34 {
            break;
        }
        acc = acc.add(term.div_f64((2 * k + 1) as f64));
    }
    acc.mul_f64(2.0).add(LN2.mul_f64(e as f64))
}

/// ln(j + a) for an integer j ≥ 0 and 0 < a ≤ 1 held exactly as given.
pub(crate) fn ln_shifted(j: u64, a: f64) -> Dd {
    let (s, e) = two_sum(j as f64, a);
    if e == 0.0 {
        return ln_dd(s);
    }
    // ln(s + e) = ln s + e/s + O((e/s)²)
    ln_dd(s).add(Dd::from_f64(e / s))
}

/// x^{−s} given ln x in double-double.
pub(crate) fn pow_neg(ln_x: Dd, s: Complex64) -> Complex64 {
    let modulus = (-s.re * ln_x.hi - s.re * ln_x.lo).exp();
    let phase = reduce_angle(ln_x.mul_f64(s.im));
    Complex64::from_polar(modulus, -phase)
}

/// Reduce a double-double angle to [−π, π] before rounding to f64.
pub(crate) fn reduce_angle(theta: Dd) -> f64 {
    let n = (theta.hi / TWO_PI.hi).round();
    if n == 0.0 {
        return theta.hi + theta.lo;
    }
    let r = theta.add(TWO_PI.mul_f64(-n));
    r.hi + r.lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_matches_libm_to_rounding() {
        for &x in &[1.0, 2.0, 3.0, 10.0, 0.3, 1e-300, 1e300, 12345.678, 104729.0] {
            let l = ln_dd(x);
            assert!((l.hi - x.ln()).abs() <= 2.0 * f64::EPSILON * x.ln().abs().max(1e-300), "x={x}");
        }
        assert_eq!(ln_dd(1.0).hi, 0.0);
    }

    #[test]
    fn ln_is_additive_in_double_double() {
        // ln 6 = ln 2 + ln 3 to well below binary64 resolution.
        for &(a, b) in &[(2.0, 3.0), (7.0, 11.0), (1009.0, 9973.0), (3.0, 0.25)] {
            let lhs = ln_dd(a * b);
            let rhs = ln_dd(a).add(ln_dd(b));
            let d = lhs.add(Dd::new(-rhs.hi, -rhs.lo));
            assert!(d.hi.abs() < 1e-29 * lhs.hi.abs().max(1.0), "{a}*{b}: {d:?}");
        }
    }

    #[test]
    fn ln2_constant() {
        let l = ln_dd(2.0);
        let d = l.add(Dd::new(-LN2.hi, -LN2.lo));
        assert!(d.hi.abs() < 1e-31);
    }

    #[test]
    fn reduced_phase_matches_small_t() {
        let s = Complex64::new(0.7, 3.0);
        for k in 1..200u64 {
            let x = k as f64;
            let a = pow_neg(ln_dd(x), s);
            let b = (-s * x.ln()).exp();
            assert!((a - b).norm() < 1e-14, "k={k}");
        }
    }
}
