//! Experiment configuration, loadable from JSON and overridable from the CLI.

use crate::arith::ThresholdOverrides;
use crate::quantize::propagator::DEFAULT_DIM_GUARD;
use crate::symplectic::{catalog, FrequencyVector, SymplecticMatrix};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Default `L`: frequencies with `|n|_inf <= 3`.
pub const DEFAULT_FREQ_BOUND: i64 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Pass/fail thresholds used by scans and the verify suite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub egorov: f64,
    pub operator_law: f64,
    pub crt_translation: f64,
    pub crt_propagator: f64,
    pub completeness: f64,
    pub projector: f64,
    pub eigenvector: f64,
    pub inequality: f64,
    pub time_average: f64,
    /// Relative gap allowed in the moment identity.
    pub moment: f64,
    /// Gap between a zero-divisor matrix element and its factor quantity.
    pub zero_divisor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            egorov: 1e-10,
            operator_law: 1e-12,
            crt_translation: 1e-12,
            crt_propagator: 1e-8,
            completeness: 1e-8,
            projector: 1e-9,
            eigenvector: 1e-8,
            inequality: 1e-8,
            time_average: 1e-10,
            moment: 1e-6,
            zero_divisor: 1e-8,
        }
    }
}

impl Tolerances {
    /// Every tolerance replaced by `t`.
    pub fn uniform(t: f64) -> Self {
        Tolerances {
            egorov: t,
            operator_law: t,
            crt_translation: t,
            crt_propagator: t,
            completeness: t,
            projector: t,
            eigenvector: t,
            inequality: t,
            time_average: t,
            moment: t,
            zero_divisor: t,
        }
    }

    /// Short stable label for cache keys.
    pub fn profile(&self) -> String {
        format!(
            "{:e}/{:e}/{:e}/{:e}/{:e}/{:e}/{:e}/{:e}/{:e}/{:e}/{:e}",
            self.egorov,
            self.operator_law,
            self.crt_translation,
            self.crt_propagator,
            self.completeness,
            self.projector,
            self.eigenvector,
            self.inequality,
            self.time_average,
            self.moment,
            self.zero_divisor
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub matrix: Vec<Vec<i64>>,
    pub g: Option<usize>,
    #[serde(rename = "N_list")]
    pub n_list: Option<Vec<u64>>,
    /// Inclusive range.
    #[serde(rename = "N_range")]
    pub n_range: Option<(u64, u64)>,
    pub r: i64,
    /// Explicit frequencies; when empty, every nonzero `n` with `|n|_inf <= freq_bound`.
    pub freqs: Vec<Vec<i64>>,
    pub freq_bound: i64,
    pub nu: u32,
    pub tolerances: Tolerances,
    pub overrides: ThresholdOverrides,
    pub cache_dir: Option<PathBuf>,
    pub jobs: usize,
    pub format: OutputFormat,
    pub seed: u64,
    /// Keep only good `N` in scans.
    pub good_only: bool,
    /// Evenly spaced subsample of the `N` list.
    pub samples: Option<usize>,
    /// Largest `N^g` accepted.
    pub dim_guard: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            matrix: catalog::a1().to_i64().expect("small entries"),
            g: None,
            n_list: None,
            n_range: None,
            r: 1,
            freqs: Vec::new(),
            freq_bound: DEFAULT_FREQ_BOUND,
            nu: 1,
            tolerances: Tolerances::default(),
            overrides: ThresholdOverrides::default(),
            cache_dir: None,
            jobs: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            format: OutputFormat::Json,
            seed: 0,
            good_only: false,
            samples: None,
            dim_guard: DEFAULT_DIM_GUARD,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn symplectic(&self) -> Result<SymplecticMatrix> {
        let a = SymplecticMatrix::from_rows(&self.matrix)?;
        if let Some(g) = self.g {
            if g != a.genus() {
                return Err(Error::InvalidInput(format!("matrix has genus {}, config says g = {g}", a.genus())));
            }
        }
        Ok(a)
    }

    pub fn genus(&self) -> usize {
        self.g.unwrap_or(self.matrix.len() / 2)
    }

    /// The `N` values, before any goodness filter or subsampling.
    pub fn moduli(&self) -> Result<Vec<u64>> {
        let mut out = match (&self.n_list, self.n_range) {
            (Some(list), _) => list.clone(),
            (None, Some((lo, hi))) => {
                if lo > hi {
                    return Err(Error::InvalidInput(format!("empty N range {lo}:{hi}")));
                }
                (lo..=hi).collect()
            }
            (None, None) => return Err(Error::InvalidInput("no N list or N range given".into())),
        };
        if out.is_empty() {
            return Err(Error::InvalidInput("N list is empty".into()));
        }
        if out.contains(&0) {
            return Err(Error::InvalidInput("N must be positive".into()));
        }
        out.dedup();
        Ok(out)
    }

    pub fn frequencies(&self) -> Vec<FrequencyVector> {
        if self.freqs.is_empty() {
            FrequencyVector::ball(self.genus(), self.freq_bound)
                .into_iter()
                .filter(|f| !f.is_zero())
                .collect()
        } else {
            self.freqs.iter().cloned().map(FrequencyVector::new).collect()
        }
    }

    /// Check the matrix, the moduli and the dimension guard.
    pub fn validate(&self) -> Result<()> {
        let a = self.symplectic()?;
        let g = a.genus();
        for f in &self.freqs {
            if f.len() != 2 * g {
                return Err(Error::InvalidInput(format!("frequency {f:?} does not have length 2g = {}", 2 * g)));
            }
        }
        if self.nu == 0 {
            return Err(Error::InvalidInput("nu must be positive".into()));
        }
        if self.n_list.is_some() || self.n_range.is_some() {
            for n in self.moduli()? {
                let d = (n as usize).checked_pow(g as u32).unwrap_or(usize::MAX);
                if d > self.dim_guard {
                    return Err(Error::ResourceGuard(format!(
                        "N = {n} gives N^g = {d} above the guard {}",
                        self.dim_guard
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `k` evenly spaced entries of `v`, always including the first and last.
pub fn subsample<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    if k >= v.len() || k == 0 {
        return v.to_vec();
    }
    if k == 1 {
        return vec![v[0].clone()];
    }
    (0..k).map(|i| v[i * (v.len() - 1) / (k - 1)].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_defaults() {
        let c = ExperimentConfig { n_list: Some(vec![5, 7]), ..Default::default() };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_json(&s).unwrap(), c);
        let d = ExperimentConfig::from_json(r#"{"matrix": [[1,2],[2,5]], "N_range": [3, 9]}"#).unwrap();
        assert_eq!(d.moduli().unwrap(), (3..=9).collect::<Vec<_>>());
        assert_eq!(d.frequencies().len(), 48);
        d.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let c = ExperimentConfig { matrix: vec![vec![1, 1], vec![1, 1]], n_list: Some(vec![3]), ..Default::default() };
        assert!(c.validate().is_err());
        let c = ExperimentConfig { n_list: Some(vec![5000]), ..Default::default() };
        assert!(matches!(c.validate(), Err(Error::ResourceGuard(_))));
        assert!(ExperimentConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn subsampling() {
        let v: Vec<u32> = (0..10).collect();
        assert_eq!(subsample(&v, 4), vec![0, 3, 6, 9]);
        assert_eq!(subsample(&v, 20), v);
    }
}
