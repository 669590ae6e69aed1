//! The `catmap` command line.

use super::config::{ExperimentConfig, OutputFormat, Tolerances};
use super::density::{exceedance_scan, good_integer_density, good_primes, split_density};
use super::output::RowSink;
use super::scan::{coprime_split, delta_points, que_scan};
use super::scar::scar_demo;
use super::verify::verify_suite;
use crate::counting::congruence::{q_count_matrix, q_count_vector, r_count, CountResult};
use crate::counting::{moment_identity_check, mordell_partial_sum};
use crate::quantize::propagator::{egorov_residual, solve_propagator_guarded};
use crate::quantize::{verify_tensor_propagator, verify_tensor_translation};
use crate::symplectic::{catalog, eigenvalues_mod_p, FrequencyVector};
use crate::arith::matrix_order;
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "catmap", version, about = "Quantized cat maps: spectra, matrix elements and the arithmetic behind them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// JSON file mirroring the experiment configuration; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// A1, A2, A3, inline rows `1,2;2,5`, JSON rows, or a path to a JSON file.
    #[arg(long, global = true)]
    pub matrix: Option<String>,
    #[arg(long, global = true)]
    pub g: Option<usize>,
    /// Comma-separated list of `N`.
    #[arg(long = "N", global = true, value_name = "LIST")]
    pub n: Option<String>,
    /// Inclusive range `a:b`.
    #[arg(long = "N-range", global = true, value_name = "A:B")]
    pub n_range: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub r: Option<i64>,
    #[arg(long, global = true)]
    pub nu: Option<u32>,
    /// Frequency, comma-separated; repeat for several.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub freq: Vec<String>,
    #[arg(long = "window-override", global = true, value_name = "V:W")]
    pub window_override: Option<String>,
    #[arg(long = "D-override", global = true)]
    pub d_override: Option<f64>,
    #[arg(long = "z-override", global = true)]
    pub z_override: Option<f64>,
    /// Replace every tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum CountWhat {
    #[default]
    Vector,
    Matrix,
    Eigenvalue,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Matrix elements, counting bounds and the prime reduction for each `N`.
    QueScan {
        /// Keep only good `N`.
        #[arg(long)]
        good_only: bool,
        /// Evenly spaced subsample of this many `N`.
        #[arg(long)]
        samples: Option<usize>,
        /// Emit long-format `(N, freq, delta)` rows.
        #[arg(long)]
        long: bool,
    },
    /// Good-prime reports for odd unramified primes up to `x`.
    GoodPrimes {
        #[arg(long)]
        x: u64,
        /// Emit only the split-density summary.
        #[arg(long)]
        summary: bool,
        /// Exponent of the order threshold `p^gamma`.
        #[arg(long)]
        exponent: Option<f64>,
    },
    /// Density of good integers up to `x`.
    GoodIntegers {
        #[arg(long)]
        x: u64,
        /// Report the smooth-part exceedance fraction at each `N` of the list instead.
        #[arg(long)]
        exceedance: bool,
    },
    /// Congruence counts `Q` and `R`.
    QCount {
        #[arg(long, value_enum, default_value = "vector")]
        what: CountWhat,
    },
    /// A Mordell sum over one period of the eigenvalues modulo `p`.
    Mordell {
        #[arg(long)]
        p: u64,
        /// Coefficients, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Number of terms; defaults to `ord(A, p)`.
        #[arg(long = "T")]
        t: Option<u64>,
    },
    /// The moment identity at each prime of the `N` list.
    MomentCheck,
    /// Tensor factorization along a coprime split of each `N`.
    CrtCheck,
    /// Largest Egorov residual over the frequency list for each `N`.
    EgorovCheck,
    /// Non-decaying matrix elements of a matrix with an invariant isotropic subspace.
    ScarDemo,
    /// Run the invariant suite.
    Verify,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| Error::InvalidInput(format!("bad {what}: {x:?}"))))
        .collect()
}

fn parse_pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::InvalidInput(format!("{what} must look like a:b")))?;
    let p = |x: &str| x.trim().parse::<T>().map_err(|_| Error::InvalidInput(format!("bad {what}: {s:?}")));
    Ok((p(a)?, p(b)?))
}

/// Named matrices, inline rows, JSON rows, or a JSON file.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    let named = match s.to_ascii_uppercase().as_str() {
        "A1" => Some(catalog::a1()),
        "A2" => Some(catalog::a2()),
        "A3" => Some(catalog::a3()),
        _ => None,
    };
    if let Some(m) = named {
        return m.to_i64().ok_or_else(|| Error::InvalidInput("matrix entries exceed i64".into()));
    }
    let t = s.trim();
    if t.starts_with('[') {
        return Ok(serde_json::from_str(t)?);
    }
    let path = std::path::Path::new(t);
    if path.exists() {
        return Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?);
    }
    t.split(';').map(|row| parse_list::<i64>(row, "matrix entry")).collect()
}

/// The configuration after applying the file and the flags.
pub fn build_config(common: &CommonArgs) -> Result<(ExperimentConfig, bool)> {
    let mut c = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let mut matrix_given = common.config.is_some();
    if let Some(m) = &common.matrix {
        c.matrix = parse_matrix(m)?;
        matrix_given = true;
    }
    if common.g.is_some() {
        c.g = common.g;
    }
    if let Some(s) = &common.n {
        c.n_list = Some(parse_list(s, "N")?);
    }
    if let Some(s) = &common.n_range {
        c.n_range = Some(parse_pair(s, "N range")?);
        c.n_list = None;
    }
    if let Some(r) = common.r {
        c.r = r;
    }
    if let Some(nu) = common.nu {
        c.nu = nu;
    }
    if !common.freq.is_empty() {
        c.freqs = common.freq.iter().map(|f| parse_list(f, "frequency")).collect::<Result<_>>()?;
    }
    if let Some(w) = &common.window_override {
        c.overrides.window = Some(parse_pair(w, "window")?);
    }
    if common.d_override.is_some() {
        c.overrides.d = common.d_override;
    }
    if common.z_override.is_some() {
        c.overrides.z = common.z_override;
    }
    if let Some(t) = common.tol {
        c.tolerances = Tolerances::uniform(t);
    }
    if common.cache_dir.is_some() {
        c.cache_dir = common.cache_dir.clone();
    }
    if let Some(j) = common.jobs {
        c.jobs = j;
    }
    if let Some(f) = common.format {
        c.format = match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        };
    }
    if let Some(s) = common.seed {
        c.seed = s;
    }
    Ok((c, matrix_given))
}

#[derive(Serialize)]
struct Timed<T: Serialize> {
    #[serde(flatten)]
    record: T,
    timing_ms: u64,
}

#[derive(Serialize)]
struct ResidualRow {
    #[serde(rename = "N")]
    n: u64,
    split: Option<(u64, u64)>,
    check: String,
    freq: Option<Vec<i64>>,
    residual: f64,
    tolerance: f64,
    passed: bool,
}

fn timed<T: Serialize>(start: Instant, record: T) -> Timed<T> {
    Timed { record, timing_ms: start.elapsed().as_millis() as u64 }
}

/// Run one parsed command, writing records to `out`; returns the exit code.
pub fn execute<W: Write>(cli: Cli, out: W) -> Result<i32> {
    let (mut config, matrix_given) = build_config(&cli.common)?;
    let mut sink = RowSink::new(config.format, out);
    match cli.command {
        Command::QueScan { good_only, samples, long } => {
            config.good_only |= good_only;
            if samples.is_some() {
                config.samples = samples;
            }
            let rows = que_scan(&config, |row| if long { Ok(()) } else { sink.write(row) })?;
            if long {
                for p in delta_points(&rows) {
                    sink.write(&p)?;
                }
            }
            Ok(0)
        }
        Command::GoodPrimes { x, summary, exponent } => {
            let a = config.symplectic()?;
            let exponent = exponent.or(config.overrides.exponent);
            if summary {
                let start = Instant::now();
                sink.write(&timed(start, split_density(&a, x)?))?;
            } else {
                for r in good_primes(&a, x, exponent)? {
                    sink.write(&r)?;
                }
            }
            Ok(0)
        }
        Command::GoodIntegers { x, exceedance } => {
            let a = config.symplectic()?;
            if exceedance {
                let xs = config.moduli()?;
                for e in exceedance_scan(&xs, a.genus(), config.overrides.z)? {
                    sink.write(&e)?;
                }
            } else {
                let start = Instant::now();
                sink.write(&timed(start, good_integer_density(&a, x, &config.overrides)?))?;
            }
            Ok(0)
        }
        Command::QCount { what } => {
            config.validate()?;
            let a = config.symplectic()?;
            let freqs = if config.freqs.is_empty() {
                vec![FrequencyVector::unit(a.genus(), 0)]
            } else {
                config.frequencies()
            };
            for n in config.moduli()? {
                let run = |f: Option<&FrequencyVector>| -> Result<CountResult> {
                    match (what, f) {
                        (CountWhat::Vector, Some(f)) => q_count_vector(&a, n, f, config.nu),
                        (CountWhat::Matrix, _) => q_count_matrix(&a, n, config.nu),
                        _ => r_count(&a, n, config.nu),
                    }
                };
                match what {
                    CountWhat::Vector => {
                        for f in &freqs {
                            let start = Instant::now();
                            sink.write(&timed(start, run(Some(f))?))?;
                        }
                    }
                    _ => {
                        let start = Instant::now();
                        sink.write(&timed(start, run(None)?))?;
                    }
                }
            }
            Ok(0)
        }
        Command::Mordell { p, alpha, t } => {
            let a = config.symplectic()?;
            let lambdas = eigenvalues_mod_p(&a, p)?;
            let alphas: Vec<i64> = parse_list(&alpha, "alpha")?;
            if alphas.len() != lambdas.len() {
                return Err(Error::InvalidInput(format!("need {} coefficients", lambdas.len())));
            }
            let alphas: Vec<u64> = alphas.iter().map(|&x| crate::arith::modular::reduce_i64(x, p)).collect();
            let t = match t {
                Some(t) => t,
                None => matrix_order(&a, p)?.order_u64().ok_or_else(|| Error::BoundExceeded("ord(A, p)".into()))?,
            };
            let start = Instant::now();
            sink.write(&timed(start, mordell_partial_sum(p, &alphas, &lambdas, t)?))?;
            Ok(0)
        }
        Command::MomentCheck => {
            let a = config.symplectic()?;
            let mut code = 0;
            for p in config.moduli()? {
                let start = Instant::now();
                let m = moment_identity_check(&a, p, config.nu)?;
                let rel = (m.lhs - m.rhs as f64).abs() / m.rhs as f64;
                if rel > config.tolerances.moment {
                    code = 1;
                }
                sink.write(&timed(start, m))?;
            }
            Ok(code)
        }
        Command::CrtCheck => {
            config.validate()?;
            let a = config.symplectic()?;
            let g = a.genus();
            let freqs = if config.freqs.is_empty() { vec![FrequencyVector::unit(g, 0)] } else { config.frequencies() };
            let tol = config.tolerances;
            let mut code = 0;
            for n in config.moduli()? {
                let split = coprime_split(n, None)?;
                let Some((n1, n2)) = split else {
                    return Err(Error::InvalidInput(format!("N = {n} has no coprime split")));
                };
                for f in &freqs {
                    let residual = verify_tensor_translation(n1, n2, &f.0)?;
                    let passed = residual <= tol.crt_translation;
                    code = code.max(i32::from(!passed));
                    let check = "translation".into();
                    sink.write(&ResidualRow { n, split, check, freq: Some(f.0.clone()), residual, tolerance: tol.crt_translation, passed })?;
                }
                let residual = verify_tensor_propagator(&a, n1, n2)?.residual;
                let passed = residual <= tol.crt_propagator;
                code = code.max(i32::from(!passed));
                let check = "propagator".into();
                sink.write(&ResidualRow { n, split, check, freq: None, residual, tolerance: tol.crt_propagator, passed })?;
            }
            Ok(code)
        }
        Command::EgorovCheck => {
            config.validate()?;
            let a = config.symplectic()?;
            let freqs = config.frequencies();
            let mut code = 0;
            for n in config.moduli()? {
                let p = solve_propagator_guarded(&a, n, config.r, config.dim_guard)?;
                let mut worst = 0.0f64;
                for f in &freqs {
                    worst = worst.max(egorov_residual(&p, &f.0)?);
                }
                let passed = worst <= config.tolerances.egorov;
                code = code.max(i32::from(!passed));
                let tolerance = config.tolerances.egorov;
                sink.write(&ResidualRow { n, split: None, check: "egorov".into(), freq: None, residual: worst, tolerance, passed })?;
            }
            Ok(code)
        }
        Command::ScarDemo => {
            let a = if matrix_given { config.symplectic()? } else { catalog::a3() };
            let ns = if config.n_list.is_some() || config.n_range.is_some() {
                config.moduli()?
            } else {
                vec![5, 9, 15, 21, 31, 45, 63]
            };
            let freq = config.freqs.first().map(|f| FrequencyVector::new(f.clone()));
            let control = catalog::a1();
            let report = scar_demo(&a, &ns, freq.as_ref(), &control, &FrequencyVector::new(vec![1, 0]))?;
            sink.write(&report)?;
            Ok(0)
        }
        Command::Verify => {
            let verdicts = verify_suite(&config.tolerances, config.seed);
            let mut code = 0;
            for v in &verdicts {
                if !v.passed {
                    code = 1;
                }
                sink.write(v)?;
            }
            Ok(code)
        }
    }
}

/// Entry point for the binary: parses arguments, runs, and maps errors onto
/// exit codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match execute(cli, stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
