//! `repro <target>`: regenerates the data behind each table and figure and
//! checks it row by row.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Result;
use clap::ValueEnum;
use euler_strip::euler::{cutoff, partial_product, product_checkpoints, product_checkpoints_over, Checkpoint, ProductOptions};
use euler_strip::lfunc::{arg_continuous, l_function};
use euler_strip::rwp::{mean_variance, prime_ensemble, rwp_series, uniform_walk, AD_CRITICAL_1PCT};
use euler_strip::specfun::riemann_siegel_theta;
use euler_strip::zeros::PrimeSum;
use euler_strip::{character, generate_primes, ComplexPoint, DirichletCharacter};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::Settings;
use crate::output::{fmt_f64, json as to_json, write_atomic, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Table1,
    Table2,
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    /// No computation; every target yields an empty row set.
    Zero,
    /// Prime counts capped at 10^6.
    Small,
    /// Everything, including the rows past the cutoff in Table I.
    Full,
}

impl Budget {
    fn max_n(self) -> u64 {
        match self {
            Budget::Zero => 0,
            Budget::Small => 1_000_000,
            Budget::Full => u64::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// |computed − expected| ≤ tolerance.
    Within,
    /// |computed − expected| > tolerance.
    Deviates,
    /// computed ≤ expected.
    AtMost,
    /// computed > expected.
    Exceeds,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub label: String,
    pub expected: f64,
    pub computed: Option<f64>,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
    pub skipped: bool,
}

impl Row {
    fn new(label: impl Into<String>, computed: f64, expected: f64, tolerance: f64, relation: Relation) -> Self {
        let pass = match relation {
            Relation::Within => (computed - expected).abs() <= tolerance,
            Relation::Deviates => (computed - expected).abs() > tolerance,
            Relation::AtMost => computed <= expected,
            Relation::Exceeds => computed > expected,
        };
        Row { label: label.into(), expected, computed: Some(computed), tolerance, relation, pass, skipped: false }
    }

    fn within(label: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        Row::new(label, computed, expected, tolerance, Relation::Within)
    }

    fn at_most(label: impl Into<String>, computed: f64, bound: f64) -> Self {
        Row::new(label, computed, bound, 0.0, Relation::AtMost)
    }

    fn exceeds(label: impl Into<String>, computed: f64, bound: f64) -> Self {
        Row::new(label, computed, bound, 0.0, Relation::Exceeds)
    }

    fn skipped(label: impl Into<String>, expected: f64, tolerance: f64, relation: Relation) -> Self {
        Row { label: label.into(), expected, computed: None, tolerance, relation, pass: true, skipped: true }
    }

    pub fn summary(&self) -> String {
        let status = if self.skipped {
            "skip"
        } else if self.pass {
            "ok  "
        } else {
            "MISS"
        };
        let rel = match self.relation {
            Relation::Within => format!("{} ± {:e}", self.expected, self.tolerance),
            Relation::Deviates => format!("differs from {} by > {}", self.expected, self.tolerance),
            Relation::AtMost => format!("≤ {}", self.expected),
            Relation::Exceeds => format!("> {}", self.expected),
        };
        match self.computed {
            Some(c) => format!("{status} {}: {c:.9} (want {rel})", self.label),
            None => format!("{status} {}: not run at this budget (want {rel})", self.label),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproReport {
    pub target: Target,
    pub rows: Vec<Row>,
    pub overall: bool,
    pub runtime: f64,
    pub config: serde_json::Value,
    pub artifacts: Vec<PathBuf>,
}

struct Ctx<'a> {
    target: Target,
    budget: Budget,
    out_dir: &'a Path,
    seed: u64,
    settings: &'a Settings,
    rows: Vec<Row>,
    params: serde_json::Map<String, serde_json::Value>,
    artifacts: Vec<PathBuf>,
}

impl Ctx<'_> {
    fn param(&mut self, key: &str, value: serde_json::Value) {
        self.params.insert(key.to_string(), value);
    }

    fn artifact(&mut self, suffix: &str, bytes: &[u8]) -> Result<()> {
        let path = self.out_dir.join(format!("{}{suffix}", self.target));
        write_atomic(&path, bytes)?;
        self.artifacts.push(path);
        Ok(())
    }

    /// N capped by the budget.
    fn cap(&self, n: u64) -> u64 {
        n.min(self.budget.max_n())
    }
}

pub fn run(target: Target, budget: Budget, out_dir: &Path, seed: u64, settings: &Settings) -> Result<ReproReport> {
    let start = Instant::now();
    let mut ctx = Ctx {
        target,
        budget,
        out_dir,
        seed,
        settings,
        rows: Vec::new(),
        params: serde_json::Map::new(),
        artifacts: Vec::new(),
    };
    if budget != Budget::Zero {
        match target {
            Target::Table1 => table1(&mut ctx)?,
            Target::Table2 => table2(&mut ctx)?,
            Target::Fig1 => fig1(&mut ctx)?,
            Target::Fig2 => fig2(&mut ctx)?,
            Target::Fig3 => fig3(&mut ctx)?,
            Target::Fig4 => fig4(&mut ctx)?,
            Target::Fig5 => fig5(&mut ctx)?,
            Target::Fig6 => fig6(&mut ctx)?,
            Target::Fig7 => fig7(&mut ctx)?,
            Target::Fig8 => fig8(&mut ctx)?,
        }
    }
    let overall = ctx.rows.iter().all(|r| r.pass);
    let config = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "target": target,
        "budget": budget,
        "seed": seed,
        "settings": settings,
        "parameters": ctx.params,
    });
    let mut report = ReproReport {
        target,
        rows: ctx.rows,
        overall,
        runtime: 0.0,
        config,
        artifacts: ctx.artifacts,
    };
    report.runtime = start.elapsed().as_secs_f64();
    if budget != Budget::Zero {
        let path = out_dir.join(format!("{target}.json"));
        report.artifacts.push(path.clone());
        write_atomic(&path, &to_json(&report)?)?;
    }
    Ok(report)
}

fn abs_l(s: ComplexPoint, chi: &DirichletCharacter) -> Result<f64> {
    Ok(l_function(s, chi)?.value.norm())
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

fn sci(n: u64) -> String {
    let e = (n as f64).log10().floor() as i32;
    let m = n as f64 / 10f64.powi(e);
    format!("{m}e{e}")
}

/// Checkpoint rows of P_N at each point, all sharing one prime list.
fn sweep(points: &[ComplexPoint], chi: &DirichletCharacter, primes: &[u64], marks: &[u64]) -> Result<Vec<Vec<Checkpoint>>> {
    points
        .par_iter()
        .map(|&s| Ok(product_checkpoints_over(s, chi, primes, marks, &ProductOptions::default())?.0))
        .collect()
}

fn exact_abs(points: &[ComplexPoint], chi: &DirichletCharacter) -> Result<Vec<f64>> {
    points.par_iter().map(|&s| abs_l(s, chi)).collect()
}

struct TableSpec {
    s: ComplexPoint,
    reference: f64,
    reference_tol: f64,
    /// (N, |⟨P_N⟩|, |P_N|, past the cutoff).
    rows: &'static [(u64, f64, f64, bool)],
}

const TABLE1_20: &[(u64, f64, f64, bool)] = &[
    (1_000, 0.976752, 0.972210, false),
    (2_000, 0.976690, 0.981506, false),
    (3_000, 0.977653, 0.976654, false),
    (4_000, 0.977865, 0.975735, false),
    (5_000, 0.977926, 0.984674, false),
    (6_000, 0.977463, 0.977893, false),
    (7_000, 0.978208, 0.976510, false),
    (8_000, 0.977593, 0.978773, false),
    (9_000, 0.978290, 0.981781, false),
    (10_000, 0.977900, 0.971017, false),
    (100_000, 0.977703, 0.971203, false),
    (1_000_000, 0.977925, 0.971491, false),
    (10_000_000, 0.978168, 0.978027, false),
    (100_000_000, 0.977823, 0.984481, false),
    (200_000_000, 0.956304, 0.885545, true),
    (300_000_000, 0.924928, 0.794254, true),
];

const TABLE1_100: &[(u64, f64, f64, bool)] = &[
    (1_000, 1.690988, 1.694894, false),
    (2_000, 1.692350, 1.694156, false),
    (3_000, 1.692590, 1.690354, false),
    (4_000, 1.692399, 1.688480, false),
    (5_000, 1.691996, 1.687150, false),
    (6_000, 1.691666, 1.689158, false),
    (7_000, 1.691508, 1.688145, false),
    (8_000, 1.691400, 1.691700, false),
    (9_000, 1.691381, 1.692973, false),
    (10_000, 1.691345, 1.690480, false),
    (100_000, 1.691373, 1.692136, false),
    (1_000_000, 1.691429, 1.691577, false),
    (10_000_000, 1.691414, 1.691703, false),
    (100_000_000, 1.691385, 1.693287, false),
    (200_000_000, 1.745257, 1.923738, true),
    (300_000_000, 1.852499, 2.203470, true),
];

const TABLE2_0: &[(u64, f64, f64, bool)] = &[
    (1_000, 0.8940791, 0.8949042, false),
    (2_000, 0.8947639, 0.8951913, false),
    (3_000, 0.8948319, 0.8946522, false),
    (4_000, 0.8947869, 0.8950135, false),
    (5_000, 0.8948144, 0.8946950, false),
    (6_000, 0.8947834, 0.8945271, false),
    (7_000, 0.8947674, 0.8948700, false),
    (8_000, 0.8947783, 0.8947044, false),
    (9_000, 0.8947768, 0.8948476, false),
    (10_000, 0.8947921, 0.8950163, false),
    (100_000, 0.8949043, 0.8949518, false),
];

const TABLE2_100: &[(u64, f64, f64, bool)] = &[
    (1_000, 0.6183514, 0.6208759, false),
    (2_000, 0.6195137, 0.6202016, false),
    (3_000, 0.6199206, 0.6211404, false),
    (4_000, 0.6201229, 0.6205615, false),
    (5_000, 0.6202306, 0.6207769, false),
    (6_000, 0.6202884, 0.6205089, false),
    (7_000, 0.6203365, 0.6207366, false),
    (8_000, 0.6203860, 0.6207027, false),
    (9_000, 0.6204248, 0.6207634, false),
    (10_000, 0.6204524, 0.6207338, false),
    (100_000, 0.6207878, 0.6209509, false),
];

/// Rows past the cutoff must differ from the reference by more than this.
const DEVIATION_THRESHOLD: f64 = 0.01;

fn run_table(ctx: &mut Ctx, chi: &DirichletCharacter, specs: &[TableSpec], tol: f64) -> Result<()> {
    let mut csv = Table::new(&["sigma", "t", "N", "abs_avg", "abs_P", "ref_abs_avg", "ref_abs_P", "abs_ref"])?;
    for spec in specs {
        let s = spec.s;
        let reference = abs_l(s, chi)?;
        let tag = format!("s = {}+{}i", s.sigma, s.t);
        ctx.rows.push(Row::within(format!("{tag}: |L(s)|"), reference, spec.reference, spec.reference_tol));

        let greyed_allowed = ctx.budget == Budget::Full;
        let runnable: Vec<u64> = spec
            .rows
            .iter()
            .filter(|r| r.0 <= ctx.cap(r.0) && (!r.3 || greyed_allowed))
            .map(|r| r.0)
            .collect();
        let n_max = runnable.iter().copied().max().unwrap_or(0);
        let (cps, _) = product_checkpoints(s, chi, n_max, &runnable, &ProductOptions::default())?;
        for &(n, avg, prod, greyed) in spec.rows {
            let label = format!("{tag}, N = {}", sci(n));
            match cps.iter().find(|c| c.n == n) {
                Some(c) => {
                    let (a, p) = (c.cesaro.norm(), c.product.norm());
                    if greyed {
                        ctx.rows.push(Row::new(
                            format!("{label}: |⟨P_N⟩| departs from |L(s)|"),
                            a,
                            reference,
                            DEVIATION_THRESHOLD,
                            Relation::Deviates,
                        ));
                    } else {
                        ctx.rows.push(Row::within(format!("{label}: |⟨P_N⟩|"), a, avg, tol));
                        ctx.rows.push(Row::within(format!("{label}: |P_N|"), p, prod, tol));
                    }
                    csv.row([
                        fmt_f64(s.sigma),
                        fmt_f64(s.t),
                        n.to_string(),
                        fmt_f64(a),
                        fmt_f64(p),
                        fmt_f64(avg),
                        fmt_f64(prod),
                        fmt_f64(reference),
                    ])?;
                }
                None if greyed => ctx.rows.push(Row::skipped(
                    format!("{label}: |⟨P_N⟩| departs from |L(s)|"),
                    spec.reference,
                    DEVIATION_THRESHOLD,
                    Relation::Deviates,
                )),
                None => {
                    ctx.rows.push(Row::skipped(format!("{label}: |⟨P_N⟩|"), avg, tol, Relation::Within));
                    ctx.rows.push(Row::skipped(format!("{label}: |P_N|"), prod, tol, Relation::Within));
                }
            }
        }
    }
    ctx.param("character", json!(chi));
    ctx.param("row_tolerance", json!(tol));
    ctx.param("deviation_threshold", json!(DEVIATION_THRESHOLD));
    ctx.param("max_n", json!(ctx.budget.max_n()));
    ctx.artifact(".csv", &csv.into_bytes()?)
}

fn table1(ctx: &mut Ctx) -> Result<()> {
    let specs = [
        TableSpec { s: ComplexPoint { sigma: 0.95, t: 20.0 }, reference: 0.977848, reference_tol: 1e-6, rows: TABLE1_20 },
        TableSpec { s: ComplexPoint { sigma: 0.95, t: 100.0 }, reference: 1.691397, reference_tol: 1e-6, rows: TABLE1_100 },
    ];
    run_table(ctx, &DirichletCharacter::trivial(), &specs, 1e-5)
}

fn table2(ctx: &mut Ctx) -> Result<()> {
    let specs = [
        TableSpec { s: ComplexPoint { sigma: 0.95, t: 0.0 }, reference: 0.89492570, reference_tol: 1e-7, rows: TABLE2_0 },
        TableSpec { s: ComplexPoint { sigma: 0.95, t: 100.0 }, reference: 0.62101132, reference_tol: 1e-7, rows: TABLE2_100 },
    ];
    run_table(ctx, &character(7, 2)?, &specs, 1e-6)
}

fn fig1(ctx: &mut Ctx) -> Result<()> {
    let (t, n) = (1e3, ctx.cap(30_000) as usize);
    let tr = rwp_series(t, &DirichletCharacter::trivial(), n, 1.0, false)?;
    let mut csv = Table::new(&["n", "B", "abs_B", "sqrt_n"])?;
    for (i, b) in tr.partials.iter().enumerate() {
        let k = (i + 1) as f64;
        csv.row([(i + 1).to_string(), fmt_f64(*b), fmt_f64(b.abs()), fmt_f64(k.sqrt())])?;
    }
    ctx.rows.push(Row::at_most("max |B_N|/√N", tr.max_sqrt_ratio(), ctx.settings.sqrt_band_principal));
    ctx.param("t", json!(t));
    ctx.param("n", json!(n));
    ctx.artifact(".csv", &csv.into_bytes()?)
}

fn fig2(ctx: &mut Ctx) -> Result<()> {
    let (t, n, e) = (1e3, ctx.cap(30_000) as usize, 80_000usize);
    let chi = DirichletCharacter::trivial();
    let prime = prime_ensemble(t, &chi, n, e, ctx.seed, false)?;
    let uniform = uniform_walk(n, e, ctx.seed)?;
    let degraded = prime_ensemble(t, &chi, n, e, ctx.seed, true)?;

    let s = ctx.settings;
    let centre = 0.5 * (s.variance_min + s.variance_max);
    let half = 0.5 * (s.variance_max - s.variance_min);
    ctx.rows.push(Row::within("variance of B_N/√N", prime.variance, centre, half));
    ctx.rows.push(Row::at_most("|mean| of B_N/√N", prime.mean.abs(), s.mean_bound));
    ctx.rows.push(Row::within("variance of R_N/√N", uniform.variance, 1.0 / 3.0, 0.01));
    let ad = degraded.anderson_darling.map_or(f64::NAN, |a| a.statistic);
    ctx.rows.push(Row::exceeds("Anderson–Darling A*² of the n log n ensemble", ad, AD_CRITICAL_1PCT));

    let mut csv = Table::new(&["bin_lo", "bin_hi", "density_prime", "density_uniform", "density_degraded"])?;
    let (dp, du, dd) = (prime.histogram.density(), uniform.histogram.density(), degraded.histogram.density());
    for i in 0..dp.len() {
        csv.row([
            fmt_f64(prime.histogram.edges[i]),
            fmt_f64(prime.histogram.edges[i + 1]),
            fmt_f64(dp[i]),
            fmt_f64(du[i]),
            fmt_f64(dd[i]),
        ])?;
    }
    ctx.param("t", json!(t));
    ctx.param("n", json!(n));
    ctx.param("ensemble_size", json!(e));
    let bulk: Vec<f64> = prime.samples.iter().copied().filter(|x| x.abs() <= 4.0).collect();
    let (_, bulk_variance) = mean_variance(&bulk);
    ctx.param("prime_samples_within_histogram", json!(bulk.len()));
    ctx.param("prime_variance_within_histogram", json!(bulk_variance));
    ctx.param("prime", json!(prime));
    ctx.param("uniform", json!(uniform));
    ctx.param("degraded", json!(degraded));
    ctx.artifact(".csv", &csv.into_bytes()?)
}

/// Z(t) = e^{iϑ(t)} ζ(1/2 + it).
fn hardy_z(t: f64) -> Result<f64> {
    let v = l_function(ComplexPoint { sigma: 0.5, t }, &DirichletCharacter::trivial())?.value;
    Ok((Complex64::from_polar(1.0, riemann_siegel_theta(t)) * v).re)
}

/// Sign changes of Z on a fine grid, reported as the midpoints of their cells.
fn z_sign_changes(t_max: f64) -> Result<Vec<f64>> {
    let ts = grid(1.0, t_max, 0.01);
    let zs: Vec<f64> = ts.par_iter().map(|&t| hardy_z(t)).collect::<Result<_>>()?;
    Ok(ts
        .windows(2)
        .zip(zs.windows(2))
        .filter(|(_, z)| z[0].signum() != z[1].signum())
        .map(|(t, _)| 0.5 * (t[0] + t[1]))
        .collect())
}

fn fig3(ctx: &mut Ctx) -> Result<()> {
    let (delta, n_primes, t_max) = (1e-3, 100usize, 100.0);
    let table = generate_primes(n_primes)?;
    let chi = DirichletCharacter::trivial();
    let sum = PrimeSum::new(&chi, table.primes());
    let ts = grid(0.1, t_max, 0.1);
    let rows: Vec<(f64, f64, f64)> = ts
        .par_iter()
        .map(|&t| {
            let smooth = riemann_siegel_theta(t) / PI + 1.0;
            let approx = smooth + sum.s_delta(t, delta, sum.len())?;
            let exact = smooth + arg_continuous(&chi, t, delta, 0.05)? / PI;
            Ok((t, approx, exact))
        })
        .collect::<Result<_>>()?;
    let zeros = z_sign_changes(t_max)?;
    let mut csv = Table::new(&["T", "n_delta", "n_exact"])?;
    for (t, a, e) in &rows {
        csv.row([fmt_f64(*t), fmt_f64(*a), fmt_f64(*e)])?;
    }
    for t in [10.0, 20.0, 50.0, 100.0] {
        let count = zeros.iter().filter(|&&z| z <= t).count() as f64;
        let p = sum.s_delta(t, delta, sum.len())? + riemann_siegel_theta(t) / PI + 1.0;
        ctx.rows.push(Row::within(format!("N_δ({t}) vs zeros of Z below {t}"), p, count, 0.5));
    }
    ctx.param("delta", json!(delta));
    ctx.param("primes", json!(n_primes));
    ctx.artifact(".csv", &csv.into_bytes()?)
}

fn fig4(ctx: &mut Ctx) -> Result<()> {
    let sigma = 0.75;
    let panels: Vec<u64> = [10, 100, 1_000, 10_000].into_iter().map(|n| ctx.cap(n)).collect();
    let table = generate_primes(*panels.last().unwrap() as usize)?;
    let chi = DirichletCharacter::trivial();
    let ts = grid(10.0, 50.0, 0.1);
    let points: Vec<ComplexPoint> = ts.iter().map(|&t| ComplexPoint { sigma, t }).collect();
    let exact = exact_abs(&points, &chi)?;
    // Each panel stops at the cutoff ⌊t²⌋ of its point.
    let rows: Vec<Vec<Checkpoint>> = points
        .par_iter()
        .map(|&s| {
            let marks: Vec<u64> = panels.iter().map(|&n| n.min(cutoff(s.t, ctx.settings.cutoff_c))).collect();
            let (cps, _) = product_checkpoints_over(s, &chi, table.primes(), &marks, &ProductOptions::default())?;
            Ok(marks.iter().map(|m| *cps.iter().find(|c| c.n == *m).expect("mark within the prime list")).collect())
        })
        .collect::<Result<_>>()?;

    let mut header = vec!["t".to_string(), "abs_zeta".to_string()];
    for n in &panels {
        header.extend([format!("n_{n}"), format!("abs_P_{n}"), format!("abs_avg_{n}")]);
    }
    let mut csv = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>())?;
    for ((t, z), row) in ts.iter().zip(&exact).zip(&rows) {
        let mut fields = vec![fmt_f64(*t), fmt_f64(*z)];
        for c in row {
            fields.extend([c.n.to_string(), fmt_f64(c.product.norm()), fmt_f64(c.cesaro.norm())]);
        }
        csv.row(fields)?;
    }
    let medians = |pick: fn(&Checkpoint) -> Complex64| -> Vec<f64> {
        (0..panels.len())
            .map(|k| median(rows.iter().zip(&exact).map(|(r, z)| relative(pick(&r[k]).norm(), *z)).collect()))
            .collect()
    };
    let product = medians(|c| c.product);
    let average = medians(|c| c.cesaro);
    ctx.rows.push(Row::exceeds(
        format!("median deviation of |P_N|, N = {} over N = min({}, ⌊t²⌋)", panels[0], panels.last().unwrap()),
        product[0] / product.last().unwrap(),
        1.0,
    ));
    ctx.rows.push(Row::at_most(
        format!("median |⟨P_N⟩|/|ζ| − 1 with N = min({}, ⌊t²⌋)", panels.last().unwrap()),
        *average.last().unwrap(),
        FIGURE_MATCH,
    ));
    ctx.param("sigma", json!(sigma));
    ctx.param("panels", json!(panels));
    ctx.param("median_deviation_product", json!(product));
    ctx.param("median_deviation_average", json!(average));
    ctx.artifact(".csv", &csv.into_bytes()?)
}

/// Relative deviation regarded as "indistinguishable" in a plot.
const FIGURE_MATCH: f64 = 0.02;
/// Relative deviation allowed for panels whose caption claims improvement
/// with N rather than agreement.
const FIGURE_ROUGH: f64 = 0.1;
/// Relative deviation regarded as a visible failure.
const FIGURE_FAILURE: f64 = 0.5;

fn fig5(ctx: &mut Ctx) -> Result<()> {
    let chi = DirichletCharacter::trivial();
    let t = 500.0;
    let n_left = ctx.cap(10_000);
    let table = generate_primes(n_left as usize)?;

    let sigmas = grid(0.05, 0.95, 0.01);
    let points: Vec<ComplexPoint> = sigmas.iter().map(|&sigma| ComplexPoint { sigma, t }).collect();
    let exact = exact_abs(&points, &chi)?;
    let cps = sweep(&points, &chi, table.primes(), &[n_left])?;
    let mut left = Table::new(&["sigma", "abs_zeta", "abs_P"])?;
    let (mut above, mut below) = (0.0f64, 0.0f64);
    for ((s, z), r) in sigmas.iter().zip(&exact).zip(&cps) {
        let p = r[0].product.norm();
        left.row([fmt_f64(*s), fmt_f64(*z), fmt_f64(p)])?;
        let d = relative(p, *z);
        if *s >= 0.6 - 1e-9 {
            above = above.max(d);
        }
        if *s <= 0.45 + 1e-9 {
            below = below.max(d);
        }
    }
    ctx.rows.push(Row::at_most("max relative deviation for σ ∈ [0.6, 0.95]", above, FIGURE_MATCH));
    ctx.rows.push(Row::exceeds("max relative deviation for σ ∈ [0.05, 0.45]", below, FIGURE_FAILURE));

    let sigma = 0.4;
    let n_right = ctx.cap(8_000);
    let ts = grid(480.0, 520.0, 0.1);
    let points: Vec<ComplexPoint> = ts.iter().map(|&t| ComplexPoint { sigma, t }).collect();
    let exact = exact_abs(&points, &chi)?;
    let cps = sweep(&points, &chi, table.primes(), &[n_right])?;
    let mut right = Table::new(&["t", "abs_zeta", "abs_P", "abs_avg"])?;
    for ((t, z), r) in ts.iter().zip(&exact).zip(&cps) {
        right.row([fmt_f64(*t), fmt_f64(*z), fmt_f64(r[0].product.norm()), fmt_f64(r[0].cesaro.norm())])?;
    }

    let s = ComplexPoint { sigma, t };
    let z = abs_l(s, &chi)?;
    let tr = partial_product(s, &chi, n_left as usize, false)?;
    let worst = |upto: usize| tr.partial_products[..upto].iter().map(|p| relative(p.norm(), z)).fold(0.0, f64::max);
    let early = worst((n_left as usize).min(1_000));
    let late = worst(n_left as usize);
    ctx.rows.push(Row::exceeds("σ = 0.4, t = 500: max relative deviation over N ≤ 10^4", late, FIGURE_FAILURE));
    ctx.rows.push(Row::exceeds("σ = 0.4, t = 500: max deviation over N ≤ 10^4 vs over N ≤ 10^3", late, early));

    ctx.param("t", json!(t));
    ctx.param("n_left", json!(n_left));
    ctx.param("n_right", json!(n_right));
    ctx.artifact("-sigma.csv", &left.into_bytes()?)?;
    ctx.artifact("-t.csv", &right.into_bytes()?)
}

fn fig6(ctx: &mut Ctx) -> Result<()> {
    let (delta, n) = (0.1, ctx.cap(100_000) as usize);
    let chi = DirichletCharacter::trivial();
    let table = generate_primes(n)?;
    let sum = PrimeSum::new(&chi, table.primes());
    let ts = grid(0.0, 100.0, 0.05);
    let rows: Vec<(f64, f64, f64)> = ts
        .par_iter()
        .map(|&t| Ok((t, arg_continuous(&chi, t, delta, 0.05)? / PI, sum.s_delta(t, delta, sum.len())?)))
        .collect::<Result<_>>()?;
    let mut csv = Table::new(&["t", "exact", "s_delta"])?;
    let mut sup = (0.0f64, 0.0f64);
    for (t, e, a) in &rows {
        csv.row([fmt_f64(*t), fmt_f64(*e), fmt_f64(*a)])?;
        if (a - e).abs() > sup.0 {
            sup = ((a - e).abs(), *t);
        }
    }
    ctx.rows.push(Row::at_most(format!("sup |S_δ − arg ζ/π| on [0, 100] (attained at t = {})", sup.1), sup.0, 0.05));
    ctx.param("delta", json!(delta));
    ctx.param("primes", json!(n));
    ctx.artifact(".csv", &csv.into_bytes()?)
}

/// Two panels of |P_N| and |⟨P_N⟩| against t, with the median relative
/// deviation of the Cesàro mean over `window` checked against `bound`.
fn panel(
    ctx: &mut Ctx,
    chi: &DirichletCharacter,
    sigma: f64,
    ts: &[f64],
    marks: &[u64],
    window: (f64, f64),
    bound: f64,
    suffix: &str,
) -> Result<(Vec<f64>, Vec<Vec<Checkpoint>>)> {
    let table = generate_primes(*marks.iter().max().unwrap() as usize)?;
    let points: Vec<ComplexPoint> = ts.iter().map(|&t| ComplexPoint { sigma, t }).collect();
    let exact = exact_abs(&points, chi)?;
    let cps = sweep(&points, chi, table.primes(), marks)?;
    let mut header = vec!["t".to_string(), "abs_L".to_string()];
    for n in marks {
        header.push(format!("abs_P_{n}"));
        header.push(format!("abs_avg_{n}"));
    }
    let mut csv = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>())?;
    for ((t, z), row) in ts.iter().zip(&exact).zip(&cps) {
        let mut fields = vec![fmt_f64(*t), fmt_f64(*z)];
        for c in row {
            fields.push(fmt_f64(c.product.norm()));
            fields.push(fmt_f64(c.cesaro.norm()));
        }
        csv.row(fields)?;
    }
    let in_window: Vec<f64> = ts
        .iter()
        .zip(&exact)
        .zip(&cps)
        .filter(|((t, _), _)| **t >= window.0 && **t <= window.1)
        .map(|((_, z), r)| relative(r.last().unwrap().cesaro.norm(), *z))
        .collect();
    ctx.rows.push(Row::at_most(
        format!(
            "σ = {sigma}, N = {}: median |⟨P_N⟩|/|L| − 1 on t ∈ [{}, {}]",
            marks.last().unwrap(),
            window.0,
            window.1
        ),
        median(in_window),
        bound,
    ));
    ctx.artifact(suffix, &csv.into_bytes()?)?;
    Ok((exact, cps))
}

fn fig7(ctx: &mut Ctx) -> Result<()> {
    let chi = DirichletCharacter::trivial();
    let ts = grid(0.0, 30.0, 0.1);
    let n_left = ctx.cap(100);
    let n_right = ctx.cap(40_000);
    panel(ctx, &chi, 0.8, &ts, &[n_left], (10.0, 30.0), FIGURE_MATCH, "-left.csv")?;
    panel(ctx, &chi, 0.55, &ts, &[n_right], (10.0, 30.0), FIGURE_ROUGH, "-right.csv")?;
    ctx.param("n_left", json!(n_left));
    ctx.param("n_right", json!(n_right));
    Ok(())
}

fn fig8(ctx: &mut Ctx) -> Result<()> {
    let chi = character(7, 2)?;
    let ts = grid(0.0, 30.0, 0.1);
    let marks = [5, ctx.cap(10_000)];
    let (exact, cps) = panel(ctx, &chi, 0.6, &ts, &marks, (0.0, 30.0), FIGURE_ROUGH, "-left.csv")?;
    let med = |k: usize| median(cps.iter().zip(&exact).map(|(r, z)| relative(r[k].product.norm(), *z)).collect());
    let (coarse, fine) = (med(0), med(1));
    ctx.rows.push(Row::exceeds(
        format!("σ = 0.6: median deviation of |P_5| over that of |P_{}|", marks[1]),
        coarse / fine,
        1.0,
    ));
    ctx.rows.push(Row::at_most(
        format!("σ = 0.6, t = 0: |P_{}|/|L| − 1", marks[1]),
        relative(cps[0][1].product.norm(), exact[0]),
        FIGURE_MATCH,
    ));

    let n_right = ctx.cap(5_000_000);
    let ts_right = grid(0.0, 30.0, 0.2);
    panel(ctx, &chi, 0.55, &ts_right, &[n_right], (0.0, 30.0), FIGURE_MATCH, "-right.csv")?;
    ctx.param("character", json!(chi));
    ctx.param("checkpoints_left", json!(marks));
    ctx.param("n_right", json!(n_right));
    Ok(())
}
