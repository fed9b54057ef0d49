mod config;
mod output;
mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use euler_strip::euler::{partial_product_with, product_checkpoints, ProductOptions};
use euler_strip::lfunc::l_function;
use euler_strip::rwp::{prime_ensemble, rwp_series, uniform_walk, EnsembleStats};
use euler_strip::zeros::{counting_with, solve_zero, solve_zeros, PrimeSum, SolverOptions};
use euler_strip::{character, generate_primes, ComplexPoint, DirichletCharacter};

use config::Settings;
use output::{emit, fmt_f64, json, Table};

#[derive(Parser, Debug)]
#[command(name = "euler-strip", version, about = "Euler products inside the critical strip")]
struct Cli {
    /// TOML file with default values; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct CharArgs {
    /// Modulus k of χ_{k,j}; omit for ζ.
    #[arg(long, default_value_t = 1)]
    modulus: u64,
    /// Index j of χ_{k,j}; j = 1 is principal.
    #[arg(long, default_value_t = 1)]
    index: u64,
}

impl CharArgs {
    fn character(&self) -> Result<DirichletCharacter> {
        Ok(character(self.modulus, self.index)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First N primes as `index,prime,gap`.
    Primes {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Value table of χ_{k,j} as `n,re,im` for n = 0..k−1.
    Character {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        index: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// L(s, χ) (ζ by default) as `re,im,abs,arg,est_error`.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partial Euler products P_n and their Cesàro means.
    EulerProduct {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        chi: CharArgs,
        /// Cutoff constant c in N_c = ⌊c t²⌋.
        #[arg(long)]
        cutoff_c: Option<f64>,
        /// Truncate at N_c instead of only warning.
        #[arg(long)]
        enforce_cutoff: bool,
        /// Comma-separated N values; the full trace is written when omitted.
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// B_n = Σ cos(u(t log p − θ_p)) as `n,b,B`.
    Rwp {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        u: f64,
        /// Replace p_n by n log n.
        #[arg(long)]
        degraded: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ensemble of B_N/√N (or R_N/√N with --uniform): stats JSON and histogram CSV.
    RwpEnsemble {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long)]
        degraded: bool,
        /// Uniform steps on [−1, 1] instead of primes.
        #[arg(long)]
        uniform: bool,
        /// Stats JSON path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Histogram CSV path.
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Solve for the nth zero ordinate; prints JSON.
    Zero {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Solve for zeros n = from..=to as CSV.
    Zeros {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// N_δ(T) on the grid T = step, 2·step, ..., t_max as `T,n_of_t`.
    Counting {
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        primes: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate a table or figure and check it against the reference values.
    Repro {
        target: repro::Target,
        #[arg(long, value_enum, default_value_t = repro::Budget::Small)]
        budget: repro::Budget,
        #[arg(long, default_value = "repro-out")]
        out_dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct SolverArgs {
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    primes: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Cutoff constant c capping the primes at ⌊c t₀²⌋.
    #[arg(long)]
    cutoff_c: Option<f64>,
    /// Use every requested prime regardless of height.
    #[arg(long)]
    no_cutoff: bool,
    /// Cesàro-average S_δ over prime prefixes.
    #[arg(long)]
    cesaro: bool,
}

impl SolverArgs {
    fn options(&self, s: &Settings) -> SolverOptions {
        SolverOptions {
            delta: self.delta.unwrap_or(s.delta),
            primes: self.primes.unwrap_or(s.primes),
            tol: self.tol.unwrap_or(s.tol),
            cutoff_c: (!self.no_cutoff).then(|| self.cutoff_c.unwrap_or(s.cutoff_c)),
            cesaro: self.cesaro,
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("EULER_STRIP_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("EULER_STRIP_THREADS = {v:?}"))?;
        if n == 0 {
            bail!("EULER_STRIP_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn point(sigma: f64, t: f64) -> Result<ComplexPoint> {
    Ok(ComplexPoint::new(sigma, t)?)
}

fn complex_fields(z: num_complex::Complex64) -> [String; 3] {
    [fmt_f64(z.re), fmt_f64(z.im), fmt_f64(z.norm())]
}

fn run(cli: Cli) -> Result<ExitCode> {
    let settings = Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Primes { count, out } => {
            let table = generate_primes(count)?;
            let mut csv = Table::new(&["index", "prime", "gap"])?;
            for (i, &p) in table.primes().iter().enumerate() {
                let gap = table.gaps().get(i).map(|g| g.to_string()).unwrap_or_default();
                csv.row([(i + 1).to_string(), p.to_string(), gap])?;
            }
            emit(out.as_deref(), &csv.into_bytes()?)?;
        }
        Command::Character { modulus, index, out } => {
            let chi = character(modulus, index)?;
            let mut csv = Table::new(&["n", "re", "im"])?;
            for (n, v) in chi.value_table().into_iter().enumerate() {
                csv.row([n.to_string(), fmt_f64(v.re), fmt_f64(v.im)])?;
            }
            emit(out.as_deref(), &csv.into_bytes()?)?;
        }
        Command::Eval { sigma, t, chi, out } => {
            let r = l_function(point(sigma, t)?, &chi.character()?)?;
            let mut csv = Table::new(&["re", "im", "abs", "arg", "est_error"])?;
            let [re, im, abs] = complex_fields(r.value);
            csv.row([re, im, abs, fmt_f64(r.value.arg()), fmt_f64(r.est_error)])?;
            emit(out.as_deref(), &csv.into_bytes()?)?;
        }
        Command::EulerProduct { sigma, t, n, chi, cutoff_c, enforce_cutoff, checkpoints, out } => {
            let s = point(sigma, t)?;
            let chi = chi.character()?;
            let opts = ProductOptions { cutoff_c: cutoff_c.unwrap_or(settings.cutoff_c), enforce_cutoff };
            let header = ["n", "re_P", "im_P", "abs_P", "re_avg", "im_avg", "abs_avg"];
            let mut csv = Table::new(&header)?;
            let cut = match checkpoints {
                Some(marks) => {
                    let (rows, cut) = product_checkpoints(s, &chi, n, &marks, &opts)?;
                    for r in rows {
                        let [a, b, c] = complex_fields(r.product);
                        let [d, e, f] = complex_fields(r.cesaro);
                        csv.row([r.n.to_string(), a, b, c, d, e, f])?;
                    }
                    cut
                }
                None => {
                    let n = usize::try_from(n).context("N does not fit in memory")?;
                    let tr = partial_product_with(s, &chi, n, &opts)?;
                    for (i, (p, m)) in tr.partial_products.iter().zip(&tr.cesaro).enumerate() {
                        let [a, b, c] = complex_fields(*p);
                        let [d, e, f] = complex_fields(*m);
                        csv.row([(i + 1).to_string(), a, b, c, d, e, f])?;
                    }
                    tr.cutoff_n
                }
            };
            if let Some(c) = cut {
                if n > c {
                    if enforce_cutoff {
                        eprintln!("note: truncated at the cutoff N_c = {c}");
                    } else {
                        eprintln!("warning: N = {n} exceeds the cutoff N_c = {c}; expect drift beyond it");
                    }
                }
            }
            emit(out.as_deref(), &csv.into_bytes()?)?;
        }
        Command::Rwp { t, n, chi, u, degraded, out } => {
            let tr = rwp_series(t, &chi.character()?, n, u, degraded)?;
            let mut csv = Table::new(&["n", "b", "B"])?;
            for (i, (b, acc)) in tr.terms.iter().zip(&tr.partials).enumerate() {
                csv.row([(i + 1).to_string(), fmt_f64(*b), fmt_f64(*acc)])?;
            }
            emit(out.as_deref(), &csv.into_bytes()?)?;
        }
        Command::RwpEnsemble { t, n, e, seed, chi, degraded, uniform, out, histogram } => {
            let seed = seed.unwrap_or(settings.seed);
            let stats = if uniform {
                uniform_walk(n, e, seed)?
            } else {
                prime_ensemble(t, &chi.character()?, n, e, seed, degraded)?
            };
            if let Some(path) = histogram {
                output::write_atomic(&path, &histogram_csv(&stats)?)?;
            }
            emit(out.as_deref(), &json(&stats)?)?;
        }
        Command::Zero { n, solver } => {
            let r = solve_zero(n, &solver.options(&settings))?;
            emit(None, &json(&r)?)?;
        }
        Command::Zeros { from, to, solver, out } => {
            let rows = solve_zeros(from, to, &solver.options(&settings))?;
            let mut csv = Table::new(&["n", "t_n", "residual", "iterations", "delta", "primes_used"])?;
            for r in rows {
                csv.row([
                    r.n.to_string(),
                    fmt_f64(r.t_n),
                    fmt_f64(r.residual),
                    r.iterations.to_string(),
                    fmt_f64(r.delta),
                    r.primes_used.to_string(),
                ])?;
            }
            emit(out.as_deref(), &csv.into_bytes()?)?;
        }
        Command::Counting { t_max, step, delta, primes, out } => {
            if !(step > 0.0) || !(t_max >= step) {
                bail!("need 0 < step ≤ t-max");
            }
            let table = generate_primes(primes.unwrap_or(settings.primes))?;
            let sum = PrimeSum::new(&DirichletCharacter::trivial(), table.primes());
            let delta = delta.unwrap_or(settings.delta);
            let mut csv = Table::new(&["T", "n_of_t"])?;
            let steps = (t_max / step + 1e-9).floor() as u64;
            for i in 1..=steps {
                let p = counting_with(&sum, i as f64 * step, delta, sum.len())?;
                csv.row([fmt_f64(p.t), fmt_f64(p.n_of_t)])?;
            }
            emit(out.as_deref(), &csv.into_bytes()?)?;
        }
        Command::Repro { target, budget, out_dir, seed } => {
            let report = repro::run(target, budget, &out_dir, seed.unwrap_or(settings.seed), &settings)?;
            for row in &report.rows {
                eprintln!("{}", row.summary());
            }
            eprintln!(
                "{} {} ({:.1} s)",
                if report.overall { "PASS" } else { "FAIL" },
                report.target,
                report.runtime
            );
            emit(None, &json(&report)?)?;
            return Ok(if report.overall { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn histogram_csv(stats: &EnsembleStats) -> Result<Vec<u8>> {
    let mut csv = Table::new(&["bin_lo", "bin_hi", "count", "density"])?;
    let density = stats.histogram.density();
    for (i, (&c, d)) in stats.histogram.counts.iter().zip(density).enumerate() {
        csv.row([
            fmt_f64(stats.histogram.edges[i]),
            fmt_f64(stats.histogram.edges[i + 1]),
            c.to_string(),
            fmt_f64(d),
        ])?;
    }
    csv.into_bytes()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
