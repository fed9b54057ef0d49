//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::f64::consts::PI;
use std::time::Instant;

use euler_strip::characters::euler_phi;
use euler_strip::euler::{cutoff, log_series, partial_product, prime_zeta_continuation, product_checkpoints, ProductOptions};
use euler_strip::lfunc::{arg_continuous, l_function, zeta};
use euler_strip::primes::mobius_table;
use euler_strip::rwp::{
    prime_ensemble, rwp_series, MEAN_BOUND, SQRT_BAND_NON_PRINCIPAL, SQRT_BAND_PRINCIPAL, VARIANCE_WINDOW,
};
use euler_strip::specfun::riemann_siegel_theta;
use euler_strip::zeros::{counting_function, solve_zero, solve_zeros, PrimeSum, SolverOptions};
use euler_strip::{character, ComplexPoint, DirichletCharacter, Primes};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    pass: bool,
    lines: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { pass: true, lines: Vec::new() }
    }

    fn within(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.pass &= ok;
        self.lines.push(format!(
            "{} {what}: got {got:.9}, expected {want} ± {tol:e} (diff {:.3e})",
            if ok { "ok  " } else { "MISS" },
            (got - want).abs()
        ));
    }

    fn require(&mut self, what: &str, ok: bool, detail: String) {
        self.pass &= ok;
        self.lines.push(format!("{} {what}: {detail}", if ok { "ok  " } else { "MISS" }));
    }

    fn note(&mut self, detail: String) {
        self.lines.push(format!("info {detail}"));
    }
}

fn pt(sigma: f64, t: f64) -> ComplexPoint {
    ComplexPoint::new(sigma, t).unwrap()
}

fn table_rows(c: &mut Check, s: ComplexPoint, chi: &DirichletCharacter, product_at: Option<(u64, f64, f64)>, avg: (f64, f64)) {
    let mut marks = vec![100_000u64];
    if let Some((n, _, _)) = product_at {
        marks.push(n);
    }
    let (rows, _) = product_checkpoints(s, chi, 100_000, &marks, &ProductOptions::default()).unwrap();
    let find = |n: u64| rows.iter().find(|r| r.n == n).unwrap();
    if let Some((n, want, tol)) = product_at {
        c.within(&format!("|P_N| at N = {n}"), find(n).product.norm(), want, tol);
    }
    c.within("|⟨P_N⟩| at N = 100000", find(100_000).cesaro.norm(), avg.0, avg.1);
}

fn criterion_1() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let s = pt(0.95, 20.0);
    table_rows(&mut c, s, &DirichletCharacter::trivial(), Some((10_000, 0.971017, 1e-5)), (0.977703, 1e-5));
    c.within("|ζ(0.95+20i)|", zeta(s).unwrap().value.norm(), 0.977848, 1e-6);
    let secs = start.elapsed().as_secs_f64();
    c.require("runtime < 30 s", secs < 30.0, format!("{secs:.2} s"));
    c
}

fn criterion_2() -> Check {
    let mut c = Check::new();
    let s = pt(0.95, 100.0);
    table_rows(&mut c, s, &DirichletCharacter::trivial(), None, (1.691373, 1e-5));
    c.within("|ζ(0.95+100i)|", zeta(s).unwrap().value.norm(), 1.691397, 1e-6);
    c
}

fn criterion_3() -> Check {
    let mut c = Check::new();
    let chi = character(7, 2).unwrap();
    for &(t, avg, l) in &[(0.0, 0.8949043, 0.89492570), (100.0, 0.6207878, 0.62101132)] {
        let s = pt(0.95, t);
        c.note(format!("s = 0.95 + {t}i"));
        table_rows(&mut c, s, &chi, None, (avg, 1e-6));
        c.within("|L(s, χ_{7,2})|", l_function(s, &chi).unwrap().value.norm(), l, 1e-7);
    }
    c
}

/// Z(t) = e^{iϑ(t)} ζ(1/2 + it).
fn z_function(t: f64) -> f64 {
    let v = zeta(ComplexPoint { sigma: 0.5, t }).unwrap().value;
    (Complex64::from_polar(1.0, riemann_siegel_theta(t)) * v).re
}

/// Ordinates of sign changes of Z below `t_max`, refined by bisection.
fn z_oracle(t_max: f64) -> Vec<f64> {
    let h = 0.02;
    let mut out = Vec::new();
    let (mut a, mut fa) = (1.0, z_function(1.0));
    while a < t_max {
        let b = a + h;
        let fb = z_function(b);
        if fa.signum() != fb.signum() {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                let fm = z_function(m);
                if fm.signum() == flo.signum() {
                    lo = m;
                    flo = fm;
                } else {
                    hi = m;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    out
}

fn criterion_4() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let opts = SolverOptions { delta: 1e-3, primes: 10_000, ..Default::default() };
    let z = solve_zero(100_000, &opts).unwrap();
    c.within("t_n for n = 100000", z.t_n, 74920.826, 0.01);
    c.note(format!("residual {:.2e}, {} iterations, {} primes", z.residual, z.iterations, z.primes_used));

    let oracle = z_oracle(146.0);
    let sols = solve_zeros(1, 50, &opts).unwrap();
    let worst = sols
        .iter()
        .zip(&oracle)
        .map(|(s, o)| ((s.t_n - o).abs(), s.n))
        .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a });
    c.require(
        "n = 1..50 within 0.1 of Z-oracle",
        oracle.len() >= 50 && worst.0 < 0.1,
        format!("max |Δ| = {:.4} at n = {}", worst.0, worst.1),
    );
    let secs = start.elapsed().as_secs_f64();
    c.require("runtime < 2 min", secs < 120.0, format!("{secs:.2} s"));
    c
}

fn criterion_5() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let chi = DirichletCharacter::trivial();
    let seed = 20_240_101;
    let ens = prime_ensemble(1e3, &chi, 30_000, 80_000, seed, false).unwrap();
    let (lo, hi) = VARIANCE_WINDOW;
    c.require(
        "variance of B_N/√N in [0.52, 0.64]",
        ens.variance >= lo && ens.variance <= hi,
        format!("{:.4}", ens.variance),
    );
    c.require("|mean| < 0.02", ens.mean.abs() < MEAN_BOUND, format!("{:.4}", ens.mean));
    let inside: Vec<f64> = ens.samples.iter().copied().filter(|x| x.abs() <= 4.0).collect();
    let (_, v_in) = euler_strip::rwp::mean_variance(&inside);
    c.note(format!(
        "samples within the histogram window [−4, 4]: {} of {}, variance {:.4}, standard deviation {:.4}",
        inside.len(),
        ens.samples.len(),
        v_in,
        v_in.sqrt()
    ));
    let degraded = prime_ensemble(1e3, &chi, 30_000, 80_000, seed, true).unwrap();
    let ad = degraded.anderson_darling.unwrap();
    c.require(
        "degraded ensemble rejects normality (Anderson–Darling, 1%)",
        ad.rejects_normality,
        format!("A*² = {:.1} vs critical {}", ad.statistic, ad.critical_1pct),
    );
    let secs = start.elapsed().as_secs_f64();
    c.require("runtime < 5 min", secs < 300.0, format!("{secs:.2} s"));
    c
}

fn criterion_6() -> Check {
    let mut c = Check::new();
    let tr = rwp_series(1e3, &DirichletCharacter::trivial(), 30_000, 1.0, false).unwrap();
    let r = tr.max_sqrt_ratio();
    c.require("trivial χ, t = 1000, N ≤ 3·10^4: max |B_N|/√N ≤ 3", r <= SQRT_BAND_PRINCIPAL, format!("{r:.4}"));
    let chi = character(7, 2).unwrap();
    for &t in &[0.0, 50.0, 500.0] {
        let r = rwp_series(t, &chi, 1_000_000, 1.0, false).unwrap().max_sqrt_ratio();
        c.require(
            &format!("χ_{{7,2}}, t = {t}, N ≤ 10^6: max |B_N|/√N ≤ 5"),
            r <= SQRT_BAND_NON_PRINCIPAL,
            format!("{r:.4}"),
        );
    }
    c
}

fn criterion_7() -> Check {
    let mut c = Check::new();
    let delta = 0.1;
    let primes: Vec<u64> = Primes::new().take(100_000).collect();
    let chi = DirichletCharacter::trivial();
    let sum = PrimeSum::new(&chi, &primes);
    let mut worst = (0.0f64, 0.0f64);
    let mut worst_late = (0.0f64, 0.0f64);
    let mut worst_cesaro = (0.0f64, 0.0f64);
    let mut worst_cut = (0.0f64, 0.0f64);
    let mut failing = 0;
    for i in 0..=2000 {
        let t = i as f64 * 0.05;
        let exact = arg_continuous(&chi, t, delta, 0.05).unwrap() / PI;
        let d = (sum.s_delta(t, delta, primes.len()).unwrap() - exact).abs();
        if d > 0.05 {
            failing += 1;
        }
        if d > worst.0 {
            worst = (d, t);
        }
        let n_cut = cutoff(t, 1.0).clamp(1, primes.len() as u64) as usize;
        let dcut = (sum.s_delta(t, delta, n_cut).unwrap() - exact).abs();
        if dcut > worst_cut.0 {
            worst_cut = (dcut, t);
        }
        if t >= 10.0 {
            if d > worst_late.0 {
                worst_late = (d, t);
            }
            let dc = (sum.s_delta_cesaro(t, delta, primes.len()).unwrap() - exact).abs();
            if dc > worst_cesaro.0 {
                worst_cesaro = (dc, t);
            }
        }
    }
    c.require(
        "sup_t |S_δ − arg ζ/π| ≤ 0.05 on [0, 100]",
        worst.0 <= 0.05,
        format!("sup = {:.4} at t = {:.2}; {failing} of 2001 grid points exceed 0.05", worst.0, worst.1),
    );
    c.note(format!(
        "primes capped at N = ⌊t²⌋ on [0, 100]: sup = {:.4} at t = {:.2}",
        worst_cut.0, worst_cut.1
    ));
    c.note(format!("raw sum on t ≥ 10: sup = {:.4} at t = {:.2}", worst_late.0, worst_late.1));
    c.note(format!(
        "Cesàro mean over prime prefixes on t ≥ 10: sup = {:.4} at t = {:.2}",
        worst_cesaro.0, worst_cesaro.1
    ));
    c
}

fn criterion_8() -> Check {
    let mut c = Check::new();
    let primes: Vec<u64> = Primes::new().take(100).collect();
    let oracle = z_oracle(101.0);
    for &t in &[10.0, 20.0, 50.0, 100.0] {
        let want = oracle.iter().filter(|&&z| z < t).count();
        let got = counting_function(t, 1e-3, &primes).unwrap().n_of_t;
        c.require(
            &format!("N_δ({t}) rounds to {want}"),
            got.round() == want as f64,
            format!("{got:.4}"),
        );
    }
    c
}

fn criterion_9() -> Check {
    let mut c = Check::new();

    // Prime zeta at σ = 2 against Σ p^{−2} over 2·10^6 primes plus the E₁ tail.
    let mut direct = 0.0;
    let mut last = 0u64;
    for p in Primes::new().take(2_000_000) {
        direct += 1.0 / (p as f64 * p as f64);
        last = p;
    }
    let l = (last as f64).ln();
    let oracle = direct + (1.0 - 1.0 / l + 2.0 / (l * l) - 6.0 / (l * l * l)) / (last as f64 * l);
    let v = prime_zeta_continuation(pt(2.0, 0.0), 20).unwrap();
    c.within("prime zeta at s = 2 vs direct sum", v.re, oracle, 1e-10);

    // exp(X_N + remainder) = P_N against direct multiplication.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let moduli = [1u64, 3, 4, 5, 7, 8, 12, 15];
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = pt(rng.gen_range(0.6..1.0), rng.gen_range(-500.0..500.0));
        let k = moduli[rng.gen_range(0..moduli.len())];
        let chi = character(k, rng.gen_range(1..=euler_phi(k))).unwrap();
        let n = rng.gen_range(1..=10_000usize);
        let (x, r) = log_series(s, &chi, n);
        let z = s.to_complex();
        let direct = Primes::new().take(n).fold(Complex64::new(1.0, 0.0), |acc, p| {
            acc / (Complex64::new(1.0, 0.0) - chi.value(p) * Complex64::new(p as f64, 0.0).powc(-z))
        });
        worst = worst.max(((x + r).exp() - direct).norm() / direct.norm());
    }
    c.require("exp(X_N + remainder) = P_N, 100 random cases", worst <= 1e-10, format!("max rel. error {worst:.2e}"));

    // Σ_{d|n} μ(d) = [n = 1].
    let mu = mobius_table(10_000);
    let mut sums = vec![0i64; 10_001];
    for d in 1..=10_000usize {
        for m in (d..=10_000).step_by(d) {
            sums[m] += mu[d] as i64;
        }
    }
    let ok = sums[1] == 1 && sums[2..].iter().all(|&s| s == 0);
    c.require("Möbius divisor sums for n ≤ 10^4", ok, String::new());

    // χ(mn) = χ(m)χ(n) for every character of modulus k ≤ 101.
    let mut failures = 0u64;
    let mut checked = 0u64;
    for k in 1..=101u64 {
        for j in 1..=euler_phi(k) {
            let chi = character(k, j).unwrap();
            let table = chi.value_table();
            for m in 0..k {
                for n in 0..k {
                    checked += 1;
                    let lhs = table[((m * n) % k) as usize];
                    if (lhs - table[m as usize] * table[n as usize]).norm() > 1e-12 {
                        failures += 1;
                    }
                }
            }
        }
    }
    c.require(
        "character multiplicativity, k ≤ 101",
        failures == 0,
        format!("{checked} products, {failures} failures"),
    );
    c
}

fn criterion_10() -> Check {
    let mut c = Check::new();
    let s = pt(0.4, 500.0);
    let exact = zeta(s).unwrap().value.norm();
    let tr = partial_product(s, &DirichletCharacter::trivial(), 10_000, false).unwrap();
    let dev: Vec<f64> = tr.partial_products.iter().map(|p| (p.norm() - exact).abs() / exact).collect();
    let max_all = dev.iter().cloned().fold(0.0, f64::max);
    let max_early = dev[..1000].iter().cloned().fold(0.0, f64::max);
    c.require("relative deviation > 50% for some N ≤ 10^4", max_all > 0.5, format!("max {max_all:.3}"));
    c.require(
        "deviation worsens from the N = 10^3 to the N = 10^4 checkpoint",
        max_all > max_early,
        format!("max over N ≤ 10^3: {max_early:.3}; over N ≤ 10^4: {max_all:.3}"),
    );
    c
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("Table I, s = 0.95 + 20i", criterion_1),
        ("Table I, s = 0.95 + 100i", criterion_2),
        ("Table II, χ_{7,2}", criterion_3),
        ("zero solver", criterion_4),
        ("CLT ensemble", criterion_5),
        ("√N growth", criterion_6),
        ("S_δ agreement", criterion_7),
        ("counting staircase", criterion_8),
        ("property suites", criterion_9),
        ("failure mode below σ = 1/2", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let check = run();
        let secs = start.elapsed().as_secs_f64();
        println!("[{}] criterion {:>2}: {name} ({secs:.1} s)", if check.pass { "PASS" } else { "FAIL" }, i + 1);
        for line in &check.lines {
            println!("        {line}");
        }
        if !check.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: {} of 10 criteria failed: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
