//! Chinese-remainder factorization `H_N = H_{N1} (x) H_{N2}` for coprime `N1, N2`.

use super::operator::{kron, CMat};
use super::propagator::propagator_matrix;
use super::state::{decode, dimension, encode, StateVector};
use super::translation::Translation;
use crate::arith::modular::{bezout_split, gcd};
use crate::symplectic::SymplecticMatrix;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Position of `Q in (Z/NZ)^g` in the product basis of `H_{N1} (x) H_{N2}`.
pub fn crt_index_map(n1: u64, n2: u64, g: usize) -> Vec<usize> {
    let n = n1 * n2;
    let d2 = dimension(n2, g);
    (0..dimension(n, g))
        .map(|idx| {
            let q = decode(idx, n, g);
            let q1: Vec<u64> = q.iter().map(|x| x % n1).collect();
            let q2: Vec<u64> = q.iter().map(|x| x % n2).collect();
            encode(&q1, n1) * d2 + encode(&q2, n2)
        })
        .collect()
}

/// `(iota* (phi1 (x) phi2))(Q) = phi1(Q mod N1) phi2(Q mod N2)`.
pub fn crt_isometry(n1: u64, n2: u64, phi1: &StateVector, phi2: &StateVector) -> Result<StateVector> {
    if gcd(n1, n2) != 1 {
        return Err(Error::InvalidInput(format!("moduli {n1} and {n2} are not coprime")));
    }
    if phi1.n != n1 || phi2.n != n2 || phi1.g != phi2.g {
        return Err(Error::InvalidInput("state spaces do not match the moduli".into()));
    }
    let g = phi1.g;
    let d2 = dimension(n2, g);
    let amplitudes = crt_index_map(n1, n2, g)
        .into_iter()
        .map(|k| phi1.amplitudes[k / d2] * phi2.amplitudes[k % d2])
        .collect();
    StateVector::new(n1 * n2, g, amplitudes)
}

/// `iota* K iota*^{-1}` for an operator `K` on the product space.
pub fn pull_back(k: &CMat, map: &[usize]) -> CMat {
    CMat::from_fn(map.len(), map.len(), |i, j| k[(map[i], map[j])])
}

/// Twists `(r1, r2)` of the factors, with `N2 r2 + N1 r1 = 1`.
pub fn factor_twists(n1: u64, n2: u64) -> Result<(i64, i64)> {
    bezout_split(n1, n2)
}

/// Frobenius norm of `T_N(n) iota* - iota* (T_{N1}^{(r2)}(n) (x) T_{N2}^{(r1)}(n))`.
pub fn verify_tensor_translation(n1: u64, n2: u64, freq: &[i64]) -> Result<f64> {
    let (r1, r2) = factor_twists(n1, n2)?;
    let g = freq.len() / 2;
    let t = Translation::new(n1 * n2, 1, freq)?.to_dense().matrix;
    let t1 = Translation::new(n1, r2, freq)?.to_dense().matrix;
    let t2 = Translation::new(n2, r1, freq)?.to_dense().matrix;
    let k = pull_back(&kron(&t1, &t2), &crt_index_map(n1, n2, g));
    Ok((t - k).norm_l2())
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TensorPropagatorCheck {
    /// `zeta` with `U_N = zeta iota*(U_{N1,r2} (x) U_{N2,r1}) iota*^{-1}`.
    pub phase: Complex64,
    /// `|tr(K* U_N)|`, which is `N^g` when the factorization holds.
    pub overlap: f64,
    /// Frobenius residual of the factorization.
    pub residual: f64,
}

pub fn verify_tensor_propagator(a: &SymplecticMatrix, n1: u64, n2: u64) -> Result<TensorPropagatorCheck> {
    let (r1, r2) = factor_twists(n1, n2)?;
    let g = a.genus();
    let (u, _) = propagator_matrix(a, n1 * n2, 1)?;
    let (u1, _) = propagator_matrix(a, n1, r2)?;
    let (u2, _) = propagator_matrix(a, n2, r1)?;
    let k = pull_back(&kron(&u1, &u2), &crt_index_map(n1, n2, g));
    let d = u.nrows();
    let mut ov = Complex64::new(0.0, 0.0);
    for j in 0..d {
        for i in 0..d {
            ov += k[(i, j)].conj() * u[(i, j)];
        }
    }
    if ov.norm() < 1e-6 * d as f64 {
        return Err(Error::Numerical("trace overlap vanishes; phase undeterminable".into()));
    }
    let phase = ov / ov.norm();
    let residual = (u - k * faer::Scale(phase)).norm_l2();
    Ok(TensorPropagatorCheck { phase, overlap: ov.norm(), residual })
}

/// Whether `(x, y) -> x y` is injective on the given eigenvalue sets,
/// comparing products to within `tol`.
pub fn products_injective(xs: &[Complex64], ys: &[Complex64], tol: f64) -> bool {
    let prods: Vec<Complex64> = xs.iter().flat_map(|x| ys.iter().map(move |y| x * y)).collect();
    prods
        .iter()
        .enumerate()
        .all(|(i, p)| prods[i + 1..].iter().all(|q| (p - q).norm() > tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::spectrum::solve_and_decompose;
    use crate::symplectic::catalog::{a1, a2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deltas_and_constants() {
        let d1 = StateVector::normalized_delta(3, 1, &[2]);
        let d2 = StateVector::normalized_delta(5, 1, &[4]);
        let w = crt_isometry(3, 5, &d1, &d2).unwrap();
        assert!(w.sub(&StateVector::normalized_delta(15, 1, &[14])).norm() < 1e-12);
        let one = Complex64::new(1.0, 0.0);
        let c = crt_isometry(3, 5, &StateVector::constant(3, 1, one), &StateVector::constant(5, 1, one)).unwrap();
        assert!(c.sub(&StateVector::constant(15, 1, one)).norm() < 1e-15);
    }

    #[test]
    fn isometry_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p1 = StateVector::random(4, 2, &mut rng);
        let p2 = StateVector::random(5, 2, &mut rng);
        let w = crt_isometry(4, 5, &p1, &p2).unwrap();
        assert!((w.norm() - p1.norm() * p2.norm()).abs() < 1e-12);
    }

    #[test]
    fn translations_factor() {
        for (n1, n2, f) in [(3, 5, vec![1, 1]), (3, 7, vec![2, 3]), (5, 7, vec![-3, 2]), (3, 5, vec![0, 0])] {
            assert!(verify_tensor_translation(n1, n2, &f).unwrap() <= 1e-12);
        }
        assert_eq!(verify_tensor_translation(3, 5, &[0, 0]).unwrap(), 0.0);
        assert!(verify_tensor_translation(3, 5, &[1, 2, -1, 3]).unwrap() <= 1e-12);
    }

    #[test]
    fn propagators_factor() {
        for (n1, n2) in [(3, 5), (3, 7), (5, 7)] {
            let c = verify_tensor_propagator(&a1(), n1, n2).unwrap();
            assert!(c.residual <= 1e-8);
            assert!((c.overlap - (n1 * n2) as f64).abs() < 1e-6);
        }
        assert!(verify_tensor_propagator(&a2(), 3, 5).unwrap().residual <= 1e-8);
    }

    #[test]
    fn coprime_periods_separate() {
        let p1 = solve_and_decompose(&a1(), 3, 2).unwrap();
        let p2 = solve_and_decompose(&a1(), 7, -1).unwrap();
        if gcd(p1.quantum_period, p2.quantum_period) == 1 {
            let x: Vec<_> = p1.eigen.iter().map(|e| e.theta).collect();
            let y: Vec<_> = p2.eigen.iter().map(|e| e.theta).collect();
            assert!(products_injective(&x, &y, 1e-9));
        }
    }
}
