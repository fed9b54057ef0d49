//! Complex log-gamma, the Riemann–Siegel theta function and Lambert W.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point s = σ + it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !sigma.is_finite() || !t.is_finite() {
            return Err(Error::Domain(format!("non-finite point {sigma} + {t}i")));
        }
        Ok(ComplexPoint { sigma, t })
    }

    pub fn real(sigma: f64) -> Self {
        ComplexPoint { sigma, t: 0.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(s: ComplexPoint) -> Self {
        s.to_complex()
    }
}

// Lanczos approximation, g = 671/128 with 14 terms (Numerical Recipes, 3rd ed.).
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn lanczos(z: Complex64) -> Complex64 {
    let tmp = z + LANCZOS_G;
    let head = (z + 0.5) * tmp.ln() - tmp;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    for (j, c) in LANCZOS_COEF.iter().enumerate() {
        ser += c / (z + (j + 1) as f64);
    }
    head + SQRT_2PI.ln() + ser.ln() - z.ln()
}

/// log Γ(s) on the branch that is analytic off the negative real axis, so the
/// imaginary part is continuous in t along any vertical line.
///
/// Left of Re s = 1/2 the value is shifted up by the recurrence
/// log Γ(s) = log Γ(s + m) − Σ log(s + k).
pub fn log_gamma(s: ComplexPoint) -> Result<Complex64> {
    let z = s.to_complex();
    if s.t == 0.0 && s.sigma <= 0.0 && s.sigma.fract() == 0.0 {
        return Err(Error::Domain(format!("Γ has a pole at {}", s.sigma)));
    }
    if s.sigma >= 0.5 {
        return Ok(lanczos(z));
    }
    let m = (0.5 - s.sigma).ceil() as usize;
    let shift: Complex64 = (0..m).map(|k| (z + k as f64).ln()).sum();
    Ok(lanczos(z + m as f64) - shift)
}

/// Above this height ϑ switches to its asymptotic series.
const THETA_DIRECT_LIMIT: f64 = 1e7;

/// ϑ(T) = arg Γ(1/4 + iT/2) − (T/2) log π, with the continuous argument.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    if t < 0.0 {
        return -riemann_siegel_theta(-t);
    }
    if t > THETA_DIRECT_LIMIT {
        return theta_asymptotic(t);
    }
    let lg = log_gamma(ComplexPoint { sigma: 0.25, t: 0.5 * t }).expect("1/4 + iT/2 is never a pole");
    lg.im - 0.5 * t * PI.ln()
}

/// (T/2) log(T/2π) − T/2 − π/8 + 1/(48T) + 7/(5760T³) + 31/(80640T⁵).
pub(crate) fn theta_asymptotic(t: f64) -> f64 {
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
}

/// ϑ′(T) = (1/2) log(T/2π) + O(T⁻²); used for Newton steps.
pub(crate) fn theta_derivative(t: f64) -> f64 {
    let t = t.abs().max(1.0);
    0.5 * (t / (2.0 * PI)).ln() - 1.0 / (48.0 * t * t)
}

const LAMBERT_TOL: f64 = 1e-14;
const LAMBERT_MAX_ITER: usize = 50;

/// Principal branch W₀(x) for x ≥ −1/e, by Halley iteration.
pub fn lambert_w(x: f64) -> Result<f64> {
    let branch = -1.0 / E;
    if x.is_nan() || x < branch {
        return Err(Error::Domain(format!("lambert_w needs x ≥ −1/e, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }

    let mut w = if x < -0.32 {
        // Series in p = sqrt(2(ex + 1)) around the branch point.
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        let series = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * 769.0 / 17280.0))));
        if p < 1e-3 {
            return Ok(series);
        }
        series
    } else if x < 3.0 {
        (1.0 + x).ln() * (1.0 - 0.15 * (1.0 + x).ln().min(1.0))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    for _ in 0..LAMBERT_MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= LAMBERT_TOL * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Stirling series after shifting Re z above 20; independent of Lanczos.
    fn log_gamma_stirling(z: Complex64) -> Complex64 {
        let shift = (20.0 - z.re).max(0.0).ceil() as usize;
        let w = z + shift as f64;
        let b2k = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
        let mut corr = Complex64::new(0.0, 0.0);
        for (i, b) in b2k.iter().enumerate() {
            let k = (i + 1) as i32;
            corr += b / (2.0 * k as f64 * (2 * k - 1) as f64 * w.powi(2 * k - 1));
        }
        let head = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + corr;
        let back: Complex64 = (0..shift).map(|k| (z + k as f64).ln()).sum();
        head - back
    }

    fn pt(sigma: f64, t: f64) -> ComplexPoint {
        ComplexPoint::new(sigma, t).unwrap()
    }

    #[test]
    fn log_gamma_special_values() {
        assert!(log_gamma(pt(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((log_gamma(pt(0.5, 0.0)).unwrap().re - 0.5 * PI.ln()).abs() < 1e-14);
        assert!((log_gamma(pt(5.0, 0.0)).unwrap().re - 24f64.ln()).abs() < 1e-14);
        assert!(matches!(log_gamma(pt(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(pt(-3.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn log_gamma_matches_stirling() {
        for &sigma in &[0.1, 0.25, 0.5, 0.95, 2.0, 7.5] {
            for &t in &[0.0, 0.3, 1.0, 7.0, 20.0, 100.0, 1000.0] {
                let a = log_gamma(pt(sigma, t)).unwrap();
                let b = log_gamma_stirling(Complex64::new(sigma, t));
                // Agreement of the logs to 1e-13 is 1e-13 relative on Γ; above that
                // the floor is set by the ulp of the log itself.
                assert!((a - b).norm() < 1e-13 + 4.0 * f64::EPSILON * b.norm(), "σ={sigma} t={t} {a} {b}");
            }
        }
    }

    #[test]
    fn log_gamma_recurrence_on_grid() {
        let mut sigma = 0.1;
        while sigma <= 3.0 {
            let mut t = -100.0;
            while t <= 100.0 {
                let s = pt(sigma, t);
                let z = s.to_complex();
                let d = log_gamma(pt(sigma + 1.0, t)).unwrap() - log_gamma(s).unwrap() - z.ln();
                let k = (d.im / (2.0 * PI)).round();
                assert!(d.re.abs() < 1e-12, "σ={sigma} t={t}");
                assert!((d.im - 2.0 * PI * k).abs() < 1e-12, "σ={sigma} t={t}");
                t += 2.5;
            }
            sigma += 0.1;
        }
    }

    #[test]
    fn log_gamma_is_continuous_on_quarter_line() {
        let mut prev = log_gamma(pt(0.25, 0.0)).unwrap().im;
        let mut t = 0.01;
        while t < 500.0 {
            let cur = log_gamma(pt(0.25, t)).unwrap().im;
            // d/dt Im logΓ ≈ log|s| stays well below 1/step here.
            assert!((cur - prev).abs() < 0.1, "jump at t={t}");
            prev = cur;
            t += 0.01;
        }
    }

    #[test]
    fn theta_values() {
        assert_eq!(riemann_siegel_theta(0.0), 0.0);
        assert!((riemann_siegel_theta(100.0) - theta_asymptotic(100.0)).abs() < 1e-9);
        assert_eq!(riemann_siegel_theta(-37.5), -riemann_siegel_theta(37.5));
    }

    #[test]
    fn theta_first_positive_root() {
        // Bisection on the asymptotic oracle.
        let (mut lo, mut hi) = (15.0, 20.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if theta_asymptotic(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 17.8455995).abs() < 1e-6);
        assert!(riemann_siegel_theta(lo).abs() < 1e-7);
    }

    #[test]
    fn theta_increasing_above_ten() {
        let mut prev = riemann_siegel_theta(10.0);
        let mut t = 10.5;
        while t < 5000.0 {
            let cur = riemann_siegel_theta(t);
            assert!(cur > prev);
            prev = cur;
            t += 0.5;
        }
    }

    #[test]
    fn theta_agrees_with_asymptotic_at_large_t() {
        for &t in &[1e3, 74920.827, 1e6, 9e6] {
            let d = riemann_siegel_theta(t) - theta_asymptotic(t);
            assert!(d.abs() < 1e-7 * (1.0 + t.log10()), "t={t} d={d}");
        }
    }

    #[test]
    fn lambert_examples() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        assert!((lambert_w(E).unwrap() - 1.0).abs() < 1e-15);
        // Newton oracle on w e^w = 1.
        let mut w = 0.5f64;
        for _ in 0..50 {
            w -= (w * w.exp() - 1.0) / ((w + 1.0) * w.exp());
        }
        assert!((lambert_w(1.0).unwrap() - w).abs() < 1e-15);
        assert!((w - 0.5671432904).abs() < 1e-10);
        assert!((lambert_w(-1.0 / E).unwrap() + 1.0).abs() < 1e-8);
        assert!(matches!(lambert_w(-0.4), Err(Error::Domain(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn lambert_round_trip(x in -1.0 / E..1e6f64) {
            let w = lambert_w(x).unwrap();
            let back = w * w.exp();
            // Near the branch point the map w ↦ w e^w is flat; compare in x.
            prop_assert!((back - x).abs() <= 1e-13 * x.abs().max(1e-3), "x={} w={} back={}", x, w, back);
        }
    }
}
