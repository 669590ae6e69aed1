//! The QUE scan: per-`N` propagators, matrix elements, counting bounds and
//! the reduction to a prime factor.

use super::cache::{CacheStats, PropagatorCache};
use super::config::{subsample, ExperimentConfig};
use crate::arith::modular::{bezout_split, gcd, reduce_i64};
use crate::arith::{is_good_integer, matrix_order};
use crate::counting::bounds::max_translation_element;
use crate::counting::q_count_vector;
use crate::quantize::crt::verify_tensor_propagator;
use crate::quantize::propagator::{egorov_residual, solve_propagator_guarded};
use crate::quantize::{eigen_decompose, Propagator};
use crate::symplectic::{FrequencyVector, SymplecticMatrix};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Largest `tau^{2 nu}` for which `Q` is computed in a scan row.
pub const SCAN_COUNT_LIMIT: u128 = 1_000_000;

/// Largest `N^g` for which the tensor factorization is checked in a row.
pub const SCAN_TENSOR_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyDelta {
    pub freq: Vec<i64>,
    /// `Delta_A(e(n.x), N)`: the largest eigenspace matrix element of `T_N(n)`.
    pub delta: f64,
    #[serde(rename = "Q")]
    pub q: Option<u128>,
    /// `N^g Q / tau^{4 nu}`.
    pub kr_rhs: Option<f64>,
    pub kr_holds: Option<bool>,
    /// Largest matrix element of `T_p(n)` over eigenspaces of `U_p(A^d)`.
    pub prime_bound: Option<f64>,
    pub chain_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub is_good: bool,
    pub witness_p: Option<u64>,
    #[serde(rename = "M")]
    pub m: Option<u64>,
    /// `gcd(ord(A, p), ord(A, M))`.
    pub d: Option<u64>,
    /// `ord(A, N)`.
    pub tau: Option<u64>,
    pub quantum_period: Option<u64>,
    pub eigenspaces: Option<usize>,
    pub deltas: Vec<FrequencyDelta>,
    pub egorov_residual: Option<f64>,
    pub tensor_residual: Option<f64>,
    pub chain_holds: Option<bool>,
    /// `explicit` or the fixed ball `|n|_inf <= L` standing in for `L(N)`.
    pub freq_policy: String,
    pub error: Option<String>,
    pub timing_ms: u64,
}

impl ScanRow {
    fn empty(n: u64, policy: &str) -> Self {
        ScanRow {
            n,
            is_good: false,
            witness_p: None,
            m: None,
            d: None,
            tau: None,
            quantum_period: None,
            eigenspaces: None,
            deltas: Vec::new(),
            egorov_residual: None,
            tensor_residual: None,
            chain_holds: None,
            freq_policy: policy.to_string(),
            error: None,
            timing_ms: 0,
        }
    }

    /// The row with its timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> ScanRow {
        ScanRow { timing_ms: 0, ..self.clone() }
    }

    pub fn delta(&self, freq: &[i64]) -> Option<f64> {
        self.deltas.iter().find(|d| d.freq == freq).map(|d| d.delta)
    }
}

/// One point of the long-format `Delta`-vs-`N` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaPoint {
    #[serde(rename = "N")]
    pub n: u64,
    pub freq: String,
    pub delta: f64,
    pub prime_bound: Option<f64>,
}

pub fn delta_points(rows: &[ScanRow]) -> Vec<DeltaPoint> {
    rows.iter()
        .flat_map(|r| {
            r.deltas.iter().map(move |d| DeltaPoint {
                n: r.n,
                freq: d.freq.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                delta: d.delta,
                prime_bound: d.prime_bound,
            })
        })
        .collect()
}

/// Shared inputs of a scan.
pub struct ScanContext {
    pub a: SymplecticMatrix,
    pub config: ExperimentConfig,
    pub freqs: Vec<FrequencyVector>,
    pub cache: Option<PropagatorCache>,
}

impl ScanContext {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let cache = match &config.cache_dir {
            Some(dir) => Some(PropagatorCache::new(dir, config.tolerances)?),
            None => None,
        };
        Ok(ScanContext { a: config.symplectic()?, config: config.clone(), freqs: config.frequencies(), cache })
    }

    fn policy(&self) -> String {
        if self.config.freqs.is_empty() {
            format!("fixed |n|_inf <= {}", self.config.freq_bound)
        } else {
            "explicit".into()
        }
    }

    fn propagator(&self, n: u64, stats: &mut CacheStats) -> Result<Propagator> {
        match &self.cache {
            Some(c) if crate::quantize::state::dimension(n, self.a.genus()) <= self.config.dim_guard => {
                c.get_or_solve(&self.a, n, self.config.r, stats)
            }
            _ => eigen_decompose(solve_propagator_guarded(&self.a, n, self.config.r, self.config.dim_guard)?),
        }
    }

    /// The `N` values a scan visits: goodness filter, then subsampling.
    pub fn schedule(&self) -> Result<Vec<u64>> {
        let mut ns = self.config.moduli()?;
        if self.config.good_only {
            let mut kept = Vec::new();
            for n in ns {
                if n >= 2 && is_good_integer(&self.a, n, &self.config.overrides)?.is_good {
                    kept.push(n);
                }
            }
            ns = kept;
        }
        if let Some(k) = self.config.samples {
            ns = subsample(&ns, k);
        }
        Ok(ns)
    }

    /// Compute one row; failures are recorded in the row.
    pub fn row(&self, n: u64) -> ScanRow {
        let start = Instant::now();
        let mut row = ScanRow::empty(n, &self.policy());
        if let Err(e) = self.fill(n, &mut row) {
            row.error = Some(e.to_string());
        }
        row.timing_ms = start.elapsed().as_millis() as u64;
        row
    }

    fn fill(&self, n: u64, row: &mut ScanRow) -> Result<()> {
        let a = &self.a;
        let g = a.genus();
        let nu = self.config.nu;
        if n >= 2 {
            let good = is_good_integer(a, n, &self.config.overrides)?;
            row.is_good = good.is_good;
            row.witness_p = good.witness_p;
            if good.is_good {
                row.m = Some(good.m);
            }
        }
        let tau = matrix_order(a, n)?.order_u64();
        row.tau = tau;
        let mut stats = CacheStats::default();
        let prop = self.propagator(n, &mut stats)?;
        row.quantum_period = Some(prop.quantum_period);
        row.eigenspaces = Some(prop.eigen.len());
        let mut worst = 0.0f64;
        for i in 0..2 * g {
            worst = worst.max(egorov_residual(&prop, &FrequencyVector::unit(g, i).0)?);
        }
        row.egorov_residual = Some(worst);

        let prime = match (row.witness_p, row.m) {
            (Some(p), Some(m)) => Some(self.prime_factor(p, m)?),
            _ => None,
        };
        if crate::quantize::state::dimension(n, g) <= SCAN_TENSOR_LIMIT {
            if let Some((n1, n2)) = coprime_split(n, row.witness_p)? {
                row.tensor_residual = Some(verify_tensor_propagator(a, n1, n2)?.residual);
            }
        }
        if let Some((_, d, _)) = &prime {
            row.d = Some(*d);
        }

        for f in &self.freqs {
            let delta = max_translation_element(&prop, &f.0)?;
            let mut fd = FrequencyDelta {
                freq: f.0.clone(),
                delta,
                q: None,
                kr_rhs: None,
                kr_holds: None,
                prime_bound: None,
                chain_holds: None,
            };
            if let Some(t) = tau {
                if (t as u128).checked_pow(2 * nu).is_some_and(|c| c <= SCAN_COUNT_LIMIT) {
                    let q = q_count_vector(a, n, f, nu)?;
                    let rhs = (n as f64).powi(g as i32) * q.value as f64 / (t as f64).powi(4 * nu as i32);
                    fd.q = Some(q.value);
                    fd.kr_rhs = Some(rhs);
                    fd.kr_holds = Some(delta.powi(4 * nu as i32) <= rhs + self.config.tolerances.inequality);
                }
            }
            if let Some((_, _, pp)) = &prime {
                let bound = max_translation_element(pp, &f.0)?;
                fd.prime_bound = Some(bound);
                fd.chain_holds = Some(delta <= bound + self.config.tolerances.inequality);
            }
            row.deltas.push(fd);
        }
        if prime.is_some() {
            row.chain_holds = Some(row.deltas.iter().all(|d| d.chain_holds == Some(true)));
        }
        Ok(())
    }

    /// `(p, d, U_{p, r r2}(A^d))` for the witness split `N = p M`.
    fn prime_factor(&self, p: u64, m: u64) -> Result<(u64, u64, Propagator)> {
        let ord_p = matrix_order(&self.a, p)?.order_u64().ok_or_else(|| Error::BoundExceeded("ord(A, p)".into()))?;
        let (d, twist) = if m == 1 {
            (1, self.config.r)
        } else {
            let ord_m = matrix_order(&self.a, m)?.order;
            let (_, r2) = bezout_split(p, m)?;
            let tw = reduce_i64(self.config.r as i64 * r2, p) as i64;
            (gcd(ord_p, (ord_m % ord_p as u128) as u64), tw)
        };
        let ad = self.a.pow(d);
        let pp = eigen_decompose(solve_propagator_guarded(&ad, p, twist, self.config.dim_guard)?)?;
        Ok((p, d, pp))
    }
}

/// `N = N1 N2` with coprime factors `> 1`: the witness prime split when there
/// is one, otherwise the full power of the smallest prime factor.
pub fn coprime_split(n: u64, witness: Option<u64>) -> Result<Option<(u64, u64)>> {
    if let Some(p) = witness {
        return Ok((n > p).then_some((p, n / p)));
    }
    let fac = crate::arith::factorize(n)?;
    if fac.factors.len() < 2 {
        return Ok(None);
    }
    let (q, e) = fac.factors[0];
    let n1 = q.pow(e);
    Ok(Some((n1, n / n1)))
}

/// Run the scan, handing each row to `emit` in input order as soon as its
/// batch completes.
pub fn que_scan<F>(config: &ExperimentConfig, mut emit: F) -> Result<Vec<ScanRow>>
where
    F: FnMut(&ScanRow) -> Result<()>,
{
    let ctx = ScanContext::new(config)?;
    let ns = ctx.schedule()?;
    let jobs = config.jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let mut rows = Vec::with_capacity(ns.len());
    for batch in ns.chunks(jobs) {
        let done: Vec<ScanRow> = pool.install(|| {
            use rayon::prelude::*;
            batch.par_iter().map(|&n| ctx.row(n)).collect()
        });
        for row in done {
            emit(&row)?;
            rows.push(row);
        }
    }
    Ok(rows)
}
