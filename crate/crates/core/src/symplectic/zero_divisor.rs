//! Frequencies as elements of the module `Z^{2g}` over `Z[A]`.

use super::charpoly::char_poly;
use super::fp_poly;
use super::linalg::{rank_int, rank_mod_p};
use super::matrix::SymplecticMatrix;
use crate::arith::modular::reduce_i64;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// An integer frequency `n = (n1, n2)` in `Z^g x Z^g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FrequencyVector(pub Vec<i64>);

impl FrequencyVector {
    pub fn new(n: Vec<i64>) -> Self {
        FrequencyVector(n)
    }

    pub fn zero(g: usize) -> Self {
        FrequencyVector(vec![0; 2 * g])
    }

    /// The `i`-th standard basis frequency.
    pub fn unit(g: usize, i: usize) -> Self {
        let mut v = vec![0; 2 * g];
        v[i] = 1;
        FrequencyVector(v)
    }

    pub fn genus(&self) -> usize {
        self.0.len() / 2
    }

    pub fn n1(&self) -> &[i64] {
        &self.0[..self.genus()]
    }

    pub fn n2(&self) -> &[i64] {
        &self.0[self.genus()..]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn neg(&self) -> Self {
        FrequencyVector(self.0.iter().map(|v| -v).collect())
    }

    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// Every frequency with `|n|_inf <= bound`.
    pub fn ball(g: usize, bound: i64) -> Vec<FrequencyVector> {
        let side = (2 * bound + 1) as usize;
        let total = side.pow(2 * g as u32);
        (0..total)
            .map(|mut code| {
                let mut v = vec![0i64; 2 * g];
                for slot in v.iter_mut() {
                    *slot = (code % side) as i64 - bound;
                    code /= side;
                }
                FrequencyVector(v)
            })
            .collect()
    }
}

/// Krylov rows `n, nA, ..., nA^{2g-1}` over `Z`.
pub fn krylov(n: &FrequencyVector, a: &SymplecticMatrix) -> Vec<Vec<BigInt>> {
    let d = a.dim();
    let mut rows = Vec::with_capacity(d);
    let mut v: Vec<BigInt> = n.0.iter().map(|&x| BigInt::from(x)).collect();
    for _ in 0..d {
        rows.push(v.clone());
        v = (0..d)
            .map(|j| (0..d).map(|i| &v[i] * a.entry(i, j)).sum())
            .collect();
    }
    rows
}

pub fn krylov_determinant(n: &FrequencyVector, a: &SymplecticMatrix) -> BigInt {
    super::linalg::det_int(&krylov(n, a))
}

/// Whether `n` is a zero-divisor, over `Q` or modulo a prime `p`.
///
/// For separable `f_A` this holds exactly when the Krylov vectors are
/// linearly dependent. The zero vector is a zero-divisor.
pub fn is_zero_divisor(
    n: &FrequencyVector,
    a: &SymplecticMatrix,
    modulus: Option<u64>,
) -> Result<bool> {
    if n.0.len() != a.dim() {
        return Err(Error::InvalidInput("frequency length must be 2g".into()));
    }
    let f = char_poly(a);
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(Error::NonSeparable);
    }
    let k = krylov(n, a);
    match modulus {
        None => Ok(rank_int(&k) < a.dim()),
        Some(p) => {
            if disc.mod_floor(&BigInt::from(p)).is_zero() {
                return Err(Error::Ramified { p });
            }
            let pb = BigInt::from(p);
            let km: Vec<Vec<u64>> = k
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|v| {
                            let m: BigInt = v.mod_floor(&pb);
                            u64::try_from(m).unwrap()
                        })
                        .collect()
                })
                .collect();
            Ok(rank_mod_p(&km, p) < a.dim())
        }
    }
}

/// The `2g` distinct roots of `f_A` modulo an odd prime `p`, sorted.
pub fn eigenvalues_mod_p(a: &SymplecticMatrix, p: u64) -> Result<Vec<u64>> {
    if p < 3 {
        return Err(Error::InvalidInput("eigenvalues_mod_p needs an odd prime".into()));
    }
    let f = char_poly(a);
    if f.discriminant().mod_floor(&BigInt::from(p)).is_zero() {
        return Err(Error::Ramified { p });
    }
    let roots = fp_poly::roots(&f.to_mod(p), p);
    if roots.len() < a.dim() {
        return Err(Error::NotSplit { p });
    }
    Ok(roots)
}

/// Reduce an integer frequency modulo `m`.
pub fn reduce_frequency(n: &FrequencyVector, m: u64) -> Vec<u64> {
    n.0.iter().map(|&x| reduce_i64(x, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::matrix::catalog::*;
    use super::*;

    #[test]
    fn zero_divisor_examples() {
        assert!(is_zero_divisor(&FrequencyVector::zero(1), &a1(), None).unwrap());
        assert!(!is_zero_divisor(&FrequencyVector::new(vec![1, 0]), &a1(), None).unwrap());
        assert!(is_zero_divisor(&FrequencyVector::new(vec![1, 0, 0, 0]), &a2(), None).unwrap());
        assert!(!is_zero_divisor(&FrequencyVector::new(vec![1, 1, 0, 0]), &a2(), None).unwrap());
        assert!(matches!(
            is_zero_divisor(&FrequencyVector::new(vec![1, 0, 0, 0]), &a3(), None),
            Err(Error::NonSeparable)
        ));
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalues_mod_p(&a1(), 7).unwrap(), vec![2, 4]);
        assert!(matches!(eigenvalues_mod_p(&a1(), 5), Err(Error::NotSplit { p: 5 })));
        assert!(matches!(eigenvalues_mod_p(&a1(), 2), Err(Error::InvalidInput(_))));
        for p in [7u64, 17, 23, 31, 41, 47] {
            if let Ok(r) = eigenvalues_mod_p(&a2(), p) {
                assert_eq!(r.len(), 4);
                for &x in &r {
                    assert!(r.contains(&crate::arith::modular::inv_mod(x, p).unwrap()));
                }
            }
        }
    }

    #[test]
    fn ball_size() {
        assert_eq!(FrequencyVector::ball(1, 1).len(), 9);
        assert_eq!(FrequencyVector::ball(2, 1).len(), 81);
    }
}
