//! The matrix-element inequality `max |<T(n) psi, psi'>|^{4 nu} <= N^g Q / tau^{4 nu}`
//! and direct measurements for zero-divisor frequencies.

use super::congruence::q_count_vector;
use crate::arith::modular::reduce_i64;
use crate::arith::order::matrix_order;
use crate::quantize::phase::PhaseTable;
use crate::quantize::spectrum::{eigenbasis, max_block_norm, solve_and_decompose};
use crate::quantize::translation::Translation;
use crate::quantize::Propagator;
use crate::symplectic::subspace::ModSubspace;
use crate::symplectic::zero_divisor::reduce_frequency;
use crate::symplectic::{char_poly_info, invariant_subspace_split, is_zero_divisor, zero_divisor_split};
use crate::symplectic::{FrequencyVector, SymplecticMatrix};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest `|P_{E'} T(n) P_E|` over ordered eigenspace pairs of `p`.
pub fn max_translation_element(p: &Propagator, freq: &[i64]) -> Result<f64> {
    if p.eigen.is_empty() {
        return Err(Error::Precondition("propagator has no eigen decomposition".into()));
    }
    if freq.len() != 2 * p.genus() {
        return Err(Error::InvalidInput("frequency length must be 2g".into()));
    }
    let two_n = 2 * p.n;
    let f: Vec<u64> = freq.iter().map(|&x| reduce_i64(x, two_n)).collect();
    let t = Translation::from_reduced(p.n, p.r, &f);
    let (v, _) = eigenbasis(&p.eigen);
    let tv = t.left_mul(&v, &PhaseTable::new(two_n));
    Ok(max_block_norm(&p.eigen, &tv, &v))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub freq: FrequencyVector,
    pub nu: u32,
    pub tau: u64,
    pub q: u128,
    pub max_element: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn kr_inequality_check(p: &Propagator, freq: &FrequencyVector, nu: u32) -> Result<KrReport> {
    let sup = max_translation_element(p, &freq.0)?;
    let q = q_count_vector(&p.a, p.n, freq, nu)?;
    let dim = (p.n as f64).powi(p.genus() as i32);
    let lhs = sup.powi(4 * nu as i32);
    let rhs = dim * q.value as f64 / (q.tau as f64).powi(4 * nu as i32);
    Ok(KrReport {
        n: p.n,
        freq: freq.clone(),
        nu,
        tau: q.tau,
        q: q.value,
        max_element: sup,
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-8,
    })
}

/// Solve and decompose `U_{N,r}(A)`, then check the inequality.
pub fn kr_inequality(a: &SymplecticMatrix, n: u64, r: i64, freq: &FrequencyVector, nu: u32) -> Result<KrReport> {
    kr_inequality_check(&solve_and_decompose(a, n, r)?, freq, nu)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroDivisorReport {
    pub p: u64,
    pub r: i64,
    pub freq: FrequencyVector,
    /// Largest matrix element of `T_p(n)` between eigenspaces of `U_{p,r}(A)`.
    pub value: f64,
    pub w1: ModSubspace,
    pub w2: ModSubspace,
    pub ord: u64,
}

/// Measure the matrix elements of a nontrivial zero-divisor frequency at a prime.
pub fn zero_divisor_bound_check(a: &SymplecticMatrix, p: u64, r: i64, freq: &FrequencyVector) -> Result<ZeroDivisorReport> {
    if a.genus() < 2 {
        return Err(Error::Precondition("zero-divisor bounds need g >= 2".into()));
    }
    let info = char_poly_info(a)?;
    if !info.separable {
        return Err(Error::NonSeparable);
    }
    if info.irreducible {
        return Err(Error::Precondition("f_A is irreducible; there are no nontrivial zero-divisors".into()));
    }
    if invariant_subspace_split(a)?.scar_prone {
        return Err(Error::ScarRegime("A has an invariant isotropic subspace".into()));
    }
    if reduce_frequency(freq, p).iter().all(|&x| x == 0) {
        return Err(Error::Precondition("frequency vanishes mod p".into()));
    }
    if !is_zero_divisor(freq, a, Some(p))? {
        return Err(Error::Precondition("frequency is not a zero-divisor mod p".into()));
    }
    let (w1, w2) = zero_divisor_split(freq, a, p)?;
    let prop = solve_and_decompose(a, p, r)?;
    let value = max_translation_element(&prop, &freq.0)?;
    let ord = matrix_order(a, p)?.order_u64().unwrap_or(0);
    Ok(ZeroDivisorReport { p, r, freq: freq.clone(), value, w1, w2, ord })
}

/// Least-squares fit `log y = c - gamma log x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub gamma: f64,
    pub intercept: f64,
    pub points: usize,
}

pub fn fit_decay(points: &[(f64, f64)]) -> Option<DecayFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(DecayFit { gamma: -slope, intercept: my - slope * mx, points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::catalog::{a1, a2};

    #[test]
    fn n7_inequality() {
        let rep = kr_inequality(&a1(), 7, 1, &FrequencyVector::new(vec![1, 0]), 1).unwrap();
        assert_eq!(rep.q, 15);
        assert!((rep.rhs - 7.0 * 15.0 / 81.0).abs() < 1e-12);
        assert!(rep.holds && rep.max_element <= 1.0 + 1e-10);
        let zero = kr_inequality(&a1(), 7, 1, &FrequencyVector::new(vec![7, 0]), 1).unwrap();
        assert!((zero.lhs - 1.0).abs() < 1e-8);
        assert!((zero.rhs - 7.0).abs() < 1e-12);
    }

    #[test]
    fn zero_divisor_matches_block() {
        let n = FrequencyVector::new(vec![1, 0, 0, 0]);
        let rep = zero_divisor_bound_check(&a2(), 7, 1, &n).unwrap();
        let block = solve_and_decompose(&a1(), 7, 1).unwrap();
        let direct = max_translation_element(&block, &[1, 0]).unwrap();
        assert!((rep.value - direct).abs() < 1e-8, "{} vs {direct}", rep.value);
        assert!(rep.value <= 1.0 + 1e-10);
        assert!(matches!(
            zero_divisor_bound_check(&a1(), 7, 1, &FrequencyVector::new(vec![1, 0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn decay_fit_recovers_exponent() {
        let pts: Vec<(f64, f64)> = [7.0, 17.0, 23.0, 31.0].iter().map(|&p: &f64| (p, 2.0 * p.powf(-0.4))).collect();
        let fit = fit_decay(&pts).unwrap();
        assert!((fit.gamma - 0.4).abs() < 1e-12);
    }
}
