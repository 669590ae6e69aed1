//! Smooth parts of shifted primes and the anatomy thresholds `D`, `V`, `W`.

use super::factor::factorize;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Iterated logarithm: `log_1 x = log x`, `log_k x = log_{k-1} max(log x, 2)`.
pub fn iterated_log(x: f64, k: u32) -> f64 {
    assert!(k >= 1);
    if k == 1 {
        x.ln()
    } else {
        iterated_log(x.ln().max(2.0), k - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnatomyThresholds {
    pub x: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub z: f64,
}

/// `D = (log x)^{(log_3 x)^2}`, `V = exp(exp(sqrt(log_2 x)))`,
/// `W = x^{log_3 x / log_2 x}`, `z = (log_2 x)^{2g+1}`.
pub fn anatomy_thresholds(x: f64, g: usize) -> Result<AnatomyThresholds> {
    if !(x >= 16.0) || !x.is_finite() {
        return Err(Error::InvalidInput(format!("anatomy thresholds need x >= 16, got {x}")));
    }
    let l1 = iterated_log(x, 1);
    let l2 = iterated_log(x, 2);
    let l3 = iterated_log(x, 3);
    Ok(AnatomyThresholds {
        x,
        d: l1.powf(l3 * l3),
        v: l2.sqrt().exp().exp(),
        w: (l1 * l3 / l2).exp(),
        z: l2.powi(2 * g as i32 + 1),
    })
}

/// The part of `m` composed of primes `<= z`.
pub fn smooth_part(m: u64, z: f64) -> u64 {
    if m == 0 {
        return 0;
    }
    factorize(m)
        .expect("nonzero")
        .factors
        .iter()
        .filter(|&&(q, _)| (q as f64) <= z)
        .map(|&(q, e)| q.pow(e))
        .product()
}

/// `s_z(N) = prod_{p | N} (z-smooth part of p - 1)`, over distinct primes.
pub fn smooth_part_s_z(n: u64, z: f64) -> u64 {
    if n <= 1 {
        return 1;
    }
    factorize(n)
        .expect("nonzero")
        .factors
        .iter()
        .map(|&(p, _)| smooth_part(p - 1, z))
        .product()
}

/// `Z = exp(log_2 x (log_3 x)^{3/2})`.
pub fn exceedance_threshold(x: f64) -> f64 {
    (iterated_log(x, 2) * iterated_log(x, 3).powf(1.5)).exp()
}

/// Fraction of `N <= x` with `s_z(N) > Z(x)`, where `z` defaults to
/// `(log_2 x)^{2g+1}`.
pub fn smooth_exceedance_fraction(x: u64, g: usize, z_override: Option<f64>) -> Result<f64> {
    let t = anatomy_thresholds(x as f64, g)?;
    let z = z_override.unwrap_or(t.z);
    let big_z = exceedance_threshold(x as f64);
    let hits = (1..=x).filter(|&n| smooth_part_s_z(n, z) as f64 > big_z).count();
    Ok(hits as f64 / x as f64)
}
