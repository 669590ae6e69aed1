//! Arithmetic scans: good primes, split densities, good-integer densities and
//! smooth-part exceedance.

use crate::arith::anatomy::smooth_exceedance_fraction;
use crate::arith::good::DEFAULT_GOOD_EXPONENT;
use crate::arith::{is_good_integer, is_good_prime, primes_up_to, GoodPrimeReport, ThresholdOverrides};
use crate::symplectic::{char_poly, fp_poly, SymplecticMatrix};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest `x` accepted by the good-integer scan.
pub const GOOD_INTEGER_LIMIT: u64 = 10_000_000;

/// Largest `x` accepted by the exceedance scan.
pub const EXCEEDANCE_LIMIT: u64 = 1_000_000;

/// Good-prime reports for the odd primes `<= x` not dividing `disc(f_A)`.
pub fn good_primes(a: &SymplecticMatrix, x: u64, exponent: Option<f64>) -> Result<Vec<GoodPrimeReport>> {
    let disc = char_poly(a).discriminant();
    primes_up_to(x)?
        .into_iter()
        .filter(|&p| p > 2 && !disc.mod_floor(&BigInt::from(p)).is_zero())
        .map(|p| is_good_prime(a, p, exponent.unwrap_or(DEFAULT_GOOD_EXPONENT)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitDensity {
    pub x: u64,
    pub unramified: u64,
    /// Primes where `f_A` has `2g` distinct roots.
    pub split: u64,
    pub fraction: f64,
}

pub fn split_density(a: &SymplecticMatrix, x: u64) -> Result<SplitDensity> {
    let f = char_poly(a);
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(Error::NonSeparable);
    }
    let (mut unramified, mut split) = (0u64, 0u64);
    for p in primes_up_to(x)? {
        if p == 2 || disc.mod_floor(&BigInt::from(p)).is_zero() {
            continue;
        }
        unramified += 1;
        if fp_poly::roots(&f.to_mod(p), p).len() == a.dim() {
            split += 1;
        }
    }
    let fraction = if unramified == 0 { 0.0 } else { split as f64 / unramified as f64 };
    Ok(SplitDensity { x, unramified, split, fraction })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodIntegerDensity {
    pub x: u64,
    pub good: u64,
    /// `good / x`.
    pub density: f64,
    /// Witness prime to number of `N` it certifies.
    pub witnesses: BTreeMap<u64, u64>,
    pub overrides: ThresholdOverrides,
}

/// Count good `N <= x`.
pub fn good_integer_density(a: &SymplecticMatrix, x: u64, overrides: &ThresholdOverrides) -> Result<GoodIntegerDensity> {
    if x > GOOD_INTEGER_LIMIT {
        return Err(Error::ResourceGuard(format!("good-integer scan limited to x <= {GOOD_INTEGER_LIMIT}")));
    }
    if x == 0 {
        return Err(Error::InvalidInput("x must be positive".into()));
    }
    let mut witnesses = BTreeMap::new();
    let mut good = 0;
    for n in 2..=x {
        let r = is_good_integer(a, n, overrides)?;
        if let Some(p) = r.witness_p {
            good += 1;
            *witnesses.entry(p).or_insert(0) += 1;
        }
    }
    Ok(GoodIntegerDensity { x, good, density: good as f64 / x as f64, witnesses, overrides: *overrides })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exceedance {
    pub x: u64,
    pub fraction: f64,
}

pub fn exceedance_scan(xs: &[u64], g: usize, z_override: Option<f64>) -> Result<Vec<Exceedance>> {
    xs.iter()
        .map(|&x| {
            if x > EXCEEDANCE_LIMIT {
                return Err(Error::ResourceGuard(format!("exceedance scan limited to x <= {EXCEEDANCE_LIMIT}")));
            }
            Ok(Exceedance { x, fraction: smooth_exceedance_fraction(x, g, z_override)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::catalog::{a1, a2};

    #[test]
    fn split_counts_against_legendre() {
        // x^2 - 6x + 1 splits iff 8 is a square mod p, i.e. p = +-1 mod 8
        let s = split_density(&a1(), 1000).unwrap();
        let direct = primes_up_to(1000).unwrap().into_iter().filter(|p| p % 8 == 1 || p % 8 == 7).count();
        assert_eq!(s.split as usize, direct);
        assert!(split_density(&a2(), 100).unwrap().fraction < s.fraction);
    }

    #[test]
    fn good_integers() {
        let ov = ThresholdOverrides { window: Some((3.0, 100.0)), ..Default::default() };
        let r = good_integer_density(&a1(), 1000, &ov).unwrap();
        assert!(r.density > 0.0 && r.density <= 1.0);
        assert_eq!(r.witnesses.values().sum::<u64>(), r.good);
        // default window starts far above small x
        assert_eq!(good_integer_density(&a1(), 50, &ThresholdOverrides::default()).unwrap().good, 0);
        let mut last = 0;
        for d in [1.0, 2.0, 4.0, 8.0] {
            let ov = ThresholdOverrides { d: Some(d), ..ov };
            let good = good_integer_density(&a1(), 500, &ov).unwrap().good;
            assert!(good >= last);
            last = good;
        }
    }

    #[test]
    fn good_prime_list() {
        let r = good_primes(&a1(), 30, None).unwrap();
        assert_eq!(r.iter().map(|x| x.p).collect::<Vec<_>>(), vec![3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(r.iter().find(|x| x.p == 7).unwrap().is_good);
    }
}
