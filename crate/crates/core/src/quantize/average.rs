//! Twisted time averages `D(n)` and the Hilbert-Schmidt chain that bounds them.

use super::operator::{matvec, spectral_norm, CMat, DenseOperator, OperatorKind};
use super::phase::PhaseTable;
use super::propagator::Propagator;
use super::translation::Translation;
use crate::arith::modular::reduce_i64;
use crate::arith::order::matrix_order;
use crate::counting::q_count_vector;
use crate::symplectic::{FrequencyVector, SymplecticMatrix};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn order_u64(a: &SymplecticMatrix, n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(1);
    }
    matrix_order(a, n)?
        .order_u64()
        .ok_or_else(|| Error::BoundExceeded("ord(A, N) exceeds 64 bits".into()))
}

/// `D(n) = tau^{-1} sum_{i=1}^{tau} mu^i T(n A^i)` with `tau = ord(A, N)`.
pub fn twisted_average(a: &SymplecticMatrix, n: u64, r: i64, freq: &[i64], mu: Complex64) -> Result<DenseOperator> {
    let tau = order_u64(a, n)?;
    let two_n = 2 * n;
    let rr = super::translation::reduce_twist(r, n)?;
    let am = a.to_mod(two_n);
    let table = PhaseTable::new(two_n);
    let mut cur: Vec<u64> = freq.iter().map(|&x| reduce_i64(x, two_n)).collect();
    let g = a.genus();
    let d = super::state::dimension(n, g);
    let mut m = CMat::zeros(d, d);
    let mut w = Complex64::new(1.0, 0.0);
    for _ in 0..tau {
        cur = am.row_mul(&cur);
        w *= mu;
        let t = Translation::from_reduced(n, rr, &cur);
        for q in 0..d {
            m[(q, t.column[q] as usize)] += w * table.get(t.phase[q] as u64);
        }
    }
    let m = m * faer::Scale(Complex64::new(1.0 / tau as f64, 0.0));
    Ok(DenseOperator::new(n, g, OperatorKind::Average, m))
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Largest `|<T(n) psi, psi'> - <D(n) psi, psi'>|` over pairs of eigenvectors,
/// with `mu = lambda'/lambda` chosen per pair.
pub fn time_average_residual(p: &Propagator, freq: &[i64]) -> Result<f64> {
    if p.eigen.is_empty() {
        return Err(Error::Precondition("propagator has no eigen decomposition".into()));
    }
    let t = Translation::new(p.n, p.r as i64, freq)?.to_dense().matrix;
    let mut worst = 0.0f64;
    for e in &p.eigen {
        for e2 in &p.eigen {
            let mu = e2.theta / e.theta;
            let dm = twisted_average(&p.a, p.n, p.r as i64, freq, mu)?.matrix;
            for k in 0..e.dim() {
                let v = e.basis.col_as_slice(k);
                let tv = matvec(&t, v);
                let dv = matvec(&dm, v);
                for k2 in 0..e2.dim() {
                    let v2 = e2.basis.col_as_slice(k2);
                    worst = worst.max((inner(&tv, v2) - inner(&dv, v2)).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// `| |tr T(m)| - N^g [m = 0 mod N] |`.
pub fn trace_law_residual(n: u64, r: i64, freq: &[i64]) -> Result<f64> {
    let t = Translation::new(n, r, freq)?;
    let expected = if freq.iter().all(|&x| x.rem_euclid(n as i64) == 0) { t.dim() as f64 } else { 0.0 };
    Ok((t.trace().norm() - expected).abs())
}

/// The chain `|D|^{4 nu} = |H^nu|^2 <= tr H^{2 nu} <= N^g Q_{2nu} / tau^{4 nu}`
/// with `H = D* D`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HsChain {
    pub nu: u32,
    pub tau: u64,
    pub q: u128,
    pub op_norm: f64,
    pub power_norm_sq: f64,
    pub trace: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn hs_chain(a: &SymplecticMatrix, n: u64, r: i64, freq: &[i64], mu: Complex64, nu: u32) -> Result<HsChain> {
    if nu == 0 {
        return Err(Error::InvalidInput("nu must be positive".into()));
    }
    let dm = twisted_average(a, n, r, freq, mu)?.matrix;
    let h = dm.adjoint() * &dm;
    let mut hn = h.clone();
    for _ in 1..nu {
        hn = &hn * &h;
    }
    let trace: f64 = {
        let h2 = &hn * &hn;
        (0..h2.nrows()).map(|i| h2[(i, i)].re).sum()
    };
    let op_norm = spectral_norm(&dm, 1e-12);
    let pn = spectral_norm(&hn, 1e-12);
    let tau = order_u64(a, n)?;
    let q = q_count_vector(a, n, &FrequencyVector::new(freq.to_vec()), nu)?.value;
    let dim = super::state::dimension(n, a.genus()) as f64;
    let bound = dim * q as f64 / (tau as f64).powi(4 * nu as i32);
    let slack = 1e-9 * bound.max(1.0);
    let holds = pn * pn <= trace + slack && trace <= bound + slack;
    Ok(HsChain { nu, tau, q, op_norm, power_norm_sq: pn * pn, trace, bound, holds })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PowerEgorovReport {
    pub d: u64,
    /// Largest relative residual of `T(e_i) U^d = U^d T(e_i A^d)` over generators.
    pub egorov_residual: f64,
    /// Largest `|U^d v - theta^d v|` over the eigenbasis, when available.
    pub eigen_residual: Option<f64>,
}

/// Check that `U(A)^d` is a propagator for `A^d` and acts on each `E_m` by `theta_m^d`.
pub fn power_egorov_check(p: &Propagator, d: u64) -> Result<PowerEgorovReport> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be positive".into()));
    }
    let u = p.matrix();
    let dim = u.nrows();
    let mut ud = CMat::identity(dim, dim);
    let mut base = u.clone();
    let mut e = d;
    while e > 0 {
        if e & 1 == 1 {
            ud = &ud * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    let two_n = 2 * p.n;
    let ad = p.a.to_mod(two_n).pow(d);
    let table = PhaseTable::new(two_n);
    let g2 = 2 * p.genus();
    let mut egorov = 0.0f64;
    for i in 0..g2 {
        let mut ei = vec![0u64; g2];
        ei[i] = 1;
        let t = Translation::from_reduced(p.n, p.r, &ei);
        let ta = Translation::from_reduced(p.n, p.r, &ad.row_mul(&ei));
        let lhs = t.left_mul(&ud, &table);
        let rhs = ta.right_mul(&ud, &table);
        egorov = egorov.max((lhs - rhs).norm_l2() / (dim as f64).sqrt());
    }
    let eigen_residual = if p.eigen.is_empty() {
        None
    } else {
        let mut worst = 0.0f64;
        for s in &p.eigen {
            let th = pow_unit(s.theta, d);
            for k in 0..s.dim() {
                let v = s.basis.col_as_slice(k);
                let w = matvec(&ud, v);
                let r: f64 = w.iter().zip(v).map(|(a, b)| (a - b * th).norm_sqr()).sum::<f64>().sqrt();
                worst = worst.max(r);
            }
        }
        Some(worst)
    };
    Ok(PowerEgorovReport { d, egorov_residual: egorov, eigen_residual })
}

fn pow_unit(z: Complex64, mut e: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut b = z;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

/// Largest `|[U^d, T(e_i)]|_F / sqrt(D)`; vanishes when `A^d = I mod 2N` acts trivially.
pub fn commutator_residual(p: &Propagator, d: u64) -> Result<f64> {
    let rep = power_egorov_check(p, d)?;
    let ad = p.a.to_mod(2 * p.n).pow(d);
    let g2 = 2 * p.genus();
    let trivial = (0..g2).all(|i| {
        let mut ei = vec![0u64; g2];
        ei[i] = 1;
        Translation::from_reduced(p.n, p.r, &ei).same_operator(&Translation::from_reduced(p.n, p.r, &ad.row_mul(&ei)))
    });
    if !trivial {
        return Err(Error::Precondition(format!("A^{d} does not fix the translations")));
    }
    Ok(rep.egorov_residual)
}
