//! Mordell-type sums `S(alpha) = sum_{t=1}^T e_p(sum_i alpha_i lambda_i^t)` and
//! the moment identity linking them to `R_{2nu}`.

use super::congruence::r_count;
use crate::arith::modular::{mul_mod, pow_mod};
use crate::arith::order::matrix_order;
use crate::quantize::phase::PhaseTable;
use crate::symplectic::{eigenvalues_mod_p, SymplecticMatrix};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest `p^{2g} T` the moment scan will evaluate.
pub const MOMENT_SCAN_GUARD: u128 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MordellSum {
    pub p: u64,
    pub alphas: Vec<u64>,
    pub lambdas: Vec<u64>,
    #[serde(rename = "T")]
    pub t: u64,
    pub value: Complex64,
    pub abs: f64,
}

pub fn mordell_partial_sum(p: u64, alphas: &[u64], lambdas: &[u64], t: u64) -> Result<MordellSum> {
    if alphas.len() != lambdas.len() {
        return Err(Error::InvalidInput("alphas and lambdas differ in length".into()));
    }
    if lambdas.iter().any(|&l| l % p == 0) {
        return Err(Error::InvalidInput("every lambda must be a unit mod p".into()));
    }
    let table = PhaseTable::new(p);
    let alphas: Vec<u64> = alphas.iter().map(|a| a % p).collect();
    let lambdas: Vec<u64> = lambdas.iter().map(|l| l % p).collect();
    let mut pw = vec![1u64; lambdas.len()];
    let mut value = Complex64::new(0.0, 0.0);
    for _ in 0..t {
        let mut e = 0u64;
        for i in 0..pw.len() {
            pw[i] = mul_mod(pw[i], lambdas[i], p);
            e = (e + mul_mod(alphas[i], pw[i], p)) % p;
        }
        value += table.get(e);
    }
    Ok(MordellSum { p, alphas, lambdas, t, value, abs: value.norm() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub p: u64,
    pub nu: u32,
    #[serde(rename = "T")]
    pub t: u64,
    /// `p^{-2g} sum_alpha |S(alpha)|^{4 nu}`.
    pub lhs: f64,
    /// `R_{2nu}(1, ..., 1; p)`.
    pub rhs: u128,
    pub matches: bool,
}

/// Compare the `4 nu`-th moment of `S` over `F_p^{2g}` with the exact count.
pub fn moment_identity_check(a: &SymplecticMatrix, p: u64, nu: u32) -> Result<MomentCheck> {
    let lambdas = eigenvalues_mod_p(a, p)?;
    let t = matrix_order(a, p)?
        .order_u64()
        .ok_or_else(|| Error::BoundExceeded("ord(A, p) exceeds 64 bits".into()))?;
    let k = lambdas.len();
    let points = (p as u128).pow(k as u32);
    if points * t as u128 > MOMENT_SCAN_GUARD {
        return Err(Error::ResourceGuard(format!("moment scan over p^{k} = {points} points is too large")));
    }
    let table = PhaseTable::new(p);
    // powers[s][i] = lambda_i^{s+1}
    let powers: Vec<Vec<u64>> = (1..=t).map(|s| lambdas.iter().map(|&l| pow_mod(l, s, p)).collect()).collect();
    let mut total = 0.0f64;
    let mut alpha = vec![0u64; k];
    for _ in 0..points {
        let s: Complex64 = powers
            .iter()
            .map(|pw| table.get(pw.iter().zip(&alpha).fold(0, |acc, (x, y)| (acc + mul_mod(*x, *y, p)) % p)))
            .sum();
        total += s.norm_sqr().powi(2 * nu as i32);
        for slot in alpha.iter_mut() {
            *slot += 1;
            if *slot < p {
                break;
            }
            *slot = 0;
        }
    }
    let lhs = total / points as f64;
    let rhs = r_count(a, p, nu)?.value;
    let matches = (lhs - rhs as f64).abs() < 1e-6 * rhs as f64;
    Ok(MomentCheck { p, nu, t, lhs, rhs, matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::phase::e;
    use crate::symplectic::catalog::a1;

    #[test]
    fn examples() {
        let s = mordell_partial_sum(7, &[0, 0], &[2, 4], 3).unwrap();
        assert!((s.value - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        let s = mordell_partial_sum(7, &[1, 0], &[2, 4], 3).unwrap();
        let direct = e(2.0 / 7.0) + e(4.0 / 7.0) + e(1.0 / 7.0);
        assert!((s.value - direct).norm() < 1e-12);
        assert!(s.abs <= 3.0);
    }

    #[test]
    fn moment_p7() {
        let m = moment_identity_check(&a1(), 7, 1).unwrap();
        assert_eq!(m.rhs, 15);
        assert!(m.matches, "{m:?}");
        assert!(matches!(moment_identity_check(&a1(), 5, 1), Err(Error::NotSplit { .. })));
    }
}
