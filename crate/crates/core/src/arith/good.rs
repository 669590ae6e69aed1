//! Good primes (split, with large eigenvalue and ratio orders) and good integers.

use super::anatomy::{anatomy_thresholds, AnatomyThresholds};
use super::factor::factorize;
use super::modular::{gcd, inv_mod, mul_mod};
use super::order::{matrix_order, mult_order};
use crate::symplectic::{char_poly, fp_poly, SymplecticMatrix};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Default exponent `gamma` in the order threshold `p^gamma`.
pub const DEFAULT_GOOD_EXPONENT: f64 = 1.0 / 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodPrimeReport {
    pub p: u64,
    pub splits: bool,
    pub roots: Vec<u64>,
    pub root_orders: Vec<u64>,
    /// `ord(lambda_i / lambda_j)`; the diagonal is 1.
    pub ratio_orders: Vec<Vec<u64>>,
    pub is_good: bool,
}

/// Optional replacements for the asymptotic thresholds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOverrides {
    /// Prime window `[V, W]`.
    pub window: Option<(f64, f64)>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
    pub z: Option<f64>,
    /// Exponent `gamma` of the good-prime order threshold.
    pub exponent: Option<f64>,
}

impl ThresholdOverrides {
    pub fn is_empty(&self) -> bool {
        self.window.is_none() && self.d.is_none() && self.z.is_none() && self.exponent.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodIntegerReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub witness_p: Option<u64>,
    #[serde(rename = "M")]
    pub m: u64,
    /// `ord(A, M)` for the witness.
    pub ord_a_m: Option<u128>,
    /// `gcd(p - 1, ord(A, M))` for the witness.
    pub gcd_value: Option<u64>,
    pub thresholds: AnatomyThresholds,
    /// The window and `D` actually applied (after overrides).
    pub window: (f64, f64),
    pub d_bound: f64,
    pub is_good: bool,
}

/// Classify an odd prime `p` not dividing `disc(f_A)`.
pub fn is_good_prime(a: &SymplecticMatrix, p: u64, exponent: f64) -> Result<GoodPrimeReport> {
    if p < 3 || !super::factor::is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let f = char_poly(a);
    if f.discriminant().mod_floor(&BigInt::from(p)).is_zero() {
        return Err(Error::Ramified { p });
    }
    let roots = fp_poly::roots(&f.to_mod(p), p);
    let splits = roots.len() == a.dim();
    let root_orders: Vec<u64> = roots
        .iter()
        .map(|&r| mult_order(r, p).map(|o| o.order as u64))
        .collect::<Result<_>>()?;
    let mut ratio_orders = Vec::new();
    if splits {
        for &x in &roots {
            let mut row = Vec::new();
            for &y in &roots {
                let ratio = mul_mod(x, inv_mod(y, p)?, p);
                row.push(mult_order(ratio, p)?.order as u64);
            }
            ratio_orders.push(row);
        }
    }
    let threshold = (p as f64).powf(exponent);
    let is_good = splits
        && root_orders.iter().all(|&o| o as f64 >= threshold)
        && ratio_orders
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &o)| i == j || o as f64 >= threshold));
    Ok(GoodPrimeReport { p, splits, roots, root_orders, ratio_orders, is_good })
}

/// Search for a witness `p || N` making `N` a good integer.
pub fn is_good_integer(
    a: &SymplecticMatrix,
    n: u64,
    overrides: &ThresholdOverrides,
) -> Result<GoodIntegerReport> {
    if n < 2 {
        return Err(Error::InvalidInput("good integers start at N = 2".into()));
    }
    let g = a.genus();
    let thresholds = anatomy_thresholds((n as f64).max(16.0), g)?;
    let window = overrides.window.unwrap_or((thresholds.v, thresholds.w));
    let d_bound = overrides.d.unwrap_or(thresholds.d);
    let exponent = overrides.exponent.unwrap_or(DEFAULT_GOOD_EXPONENT);
    let disc = char_poly(a).discriminant();
    let mut report = GoodIntegerReport {
        n,
        witness_p: None,
        m: n,
        ord_a_m: None,
        gcd_value: None,
        thresholds,
        window,
        d_bound,
        is_good: false,
    };
    for &(p, e) in &factorize(n)?.factors {
        if e != 1 || p == 2 || (p as f64) < window.0 || (p as f64) > window.1 {
            continue;
        }
        if disc.mod_floor(&BigInt::from(p)).is_zero() {
            continue;
        }
        if !is_good_prime(a, p, exponent)?.is_good {
            continue;
        }
        let m = n / p;
        let ord = if m == 1 { 1 } else { matrix_order(a, m)?.order };
        let gv = gcd(p - 1, (ord % (p - 1) as u128) as u64);
        let gv = if gv == 0 { p - 1 } else { gv };
        if gv as f64 <= d_bound {
            report.witness_p = Some(p);
            report.m = m;
            report.ord_a_m = Some(ord);
            report.gcd_value = Some(gv);
            report.is_good = true;
            return Ok(report);
        }
    }
    Ok(report)
}
