//! Characteristic polynomial of the classical map and the eigenvalue
//! root-of-unity exclusions.

use super::matrix::{mat_mul, SymplecticMatrix};
use super::poly::{cyclotomic, cyclotomic_indices, interpolate_integer, IntPoly};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPolyInfo {
    /// `det(xI - A)`, coefficients low to high.
    pub polynomial: IntPoly,
    pub discriminant: BigInt,
    /// Monic irreducible factors over `Q` with multiplicities.
    pub rational_factors: Vec<(IntPoly, u32)>,
    pub separable: bool,
    pub irreducible: bool,
}

impl CharPolyInfo {
    pub fn coefficients(&self) -> &[BigInt] {
        self.polynomial.coeffs()
    }
}

/// `det(xI - A)` by the Faddeev-LeVerrier recursion (all divisions exact).
pub fn char_poly(a: &SymplecticMatrix) -> IntPoly {
    let n = a.dim();
    let e = a.entries();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(e, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(e, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / BigInt::from(k);
    }
    IntPoly::new(coeffs)
}

pub fn char_poly_info(a: &SymplecticMatrix) -> Result<CharPolyInfo> {
    let f = char_poly(a);
    let discriminant = f.discriminant();
    let rational_factors = f.factor_over_q()?;
    let irreducible = rational_factors.len() == 1 && rational_factors[0].1 == 1;
    Ok(CharPolyInfo {
        separable: !discriminant.is_zero(),
        polynomial: f,
        discriminant,
        rational_factors,
        irreducible,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnityReport {
    /// No eigenvalue is a root of unity.
    pub ergodic: bool,
    /// Indices `m` with `Phi_m | f_A`.
    pub cyclotomic_divisors: Vec<u64>,
    /// No ratio of distinct eigenvalues is a root of unity.
    pub ratio_condition: bool,
    /// Indices `m` with `Phi_m` dividing the reduced ratio polynomial.
    pub ratio_cyclotomic_divisors: Vec<u64>,
    /// `prod_{alpha != beta} (x - alpha / beta)`.
    pub reduced_ratio_polynomial: IntPoly,
}

/// `prod_{alpha, beta} (x - alpha / beta)` over the roots of a monic `f` with
/// `f(0) = 1`, as `Res_y(f(y), f(xy))` interpolated at integer points.
pub fn ratio_polynomial(f: &IntPoly) -> Result<IntPoly> {
    let d = f.degree();
    if !f.is_monic() || !f.coeffs()[0].is_one() {
        return Err(Error::InvalidInput(
            "ratio polynomial expects a monic polynomial with constant term 1".into(),
        ));
    }
    let deg = d * d;
    let xs: Vec<BigInt> = (1..=deg as i64 + 1).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs.iter().map(|x| f.resultant(&f.scale_argument(x))).collect();
    interpolate_integer(&xs, &ys)
        .ok_or_else(|| Error::Numerical("ratio polynomial interpolation is not integral".into()))
}

/// Root-of-unity exclusions on a separable monic reciprocal polynomial.
pub fn root_of_unity_checks_poly(f: &IntPoly) -> Result<RootOfUnityReport> {
    if f.discriminant().is_zero() {
        return Err(Error::NonSeparable);
    }
    let d = f.degree() as u64;
    let cyclotomic_divisors: Vec<u64> = cyclotomic_indices(d)
        .into_iter()
        .filter(|&m| cyclotomic(m).divides(f))
        .collect();
    let r = ratio_polynomial(f)?;
    let trivial = IntPoly::x_minus(1).pow(d as u32);
    let reduced = r
        .div_exact(&trivial)
        .ok_or_else(|| Error::Numerical("ratio polynomial lacks the forced (x - 1) factor".into()))?;
    let rdeg = reduced.degree() as u64;
    let ratio_cyclotomic_divisors: Vec<u64> = cyclotomic_indices(d * d)
        .into_iter()
        .filter(|&m| super::poly::euler_phi(m) <= rdeg && cyclotomic(m).divides(&reduced))
        .collect();
    Ok(RootOfUnityReport {
        ergodic: cyclotomic_divisors.is_empty(),
        cyclotomic_divisors,
        ratio_condition: ratio_cyclotomic_divisors.is_empty(),
        ratio_cyclotomic_divisors,
        reduced_ratio_polynomial: reduced,
    })
}

pub fn root_of_unity_checks(a: &SymplecticMatrix) -> Result<RootOfUnityReport> {
    root_of_unity_checks_poly(&char_poly(a))
}

#[cfg(test)]
mod tests {
    use super::super::matrix::catalog::*;
    use super::*;

    #[test]
    fn char_poly_examples() {
        let info = char_poly_info(&a1()).unwrap();
        assert_eq!(info.polynomial, IntPoly::from_i64(&[1, -6, 1]));
        assert_eq!(info.discriminant, BigInt::from(32));
        assert!(info.irreducible && info.separable);

        let info = char_poly_info(&a2()).unwrap();
        assert_eq!(
            info.polynomial,
            IntPoly::from_i64(&[1, -6, 1]).mul(&IntPoly::from_i64(&[1, -18, 1]))
        );
        assert!(info.separable && !info.irreducible);
        assert_eq!(info.rational_factors.len(), 2);

        let id = char_poly_info(&SymplecticMatrix::identity(1)).unwrap();
        assert_eq!(id.polynomial, IntPoly::from_i64(&[1, -2, 1]));
        assert!(!id.separable);

        let a3 = char_poly_info(&a3()).unwrap();
        assert_eq!(a3.rational_factors, vec![(IntPoly::from_i64(&[1, -6, 1]), 2)]);
    }

    #[test]
    fn root_of_unity_examples() {
        let r = root_of_unity_checks(&a1()).unwrap();
        assert!(r.ergodic && r.ratio_condition);
        let r = root_of_unity_checks(&a2()).unwrap();
        assert!(r.ergodic && r.ratio_condition);
        assert_eq!(r.reduced_ratio_polynomial.degree(), 12);

        let r = root_of_unity_checks_poly(&cyclotomic(5)).unwrap();
        assert!(!r.ergodic);
        assert_eq!(r.cyclotomic_divisors, vec![5]);
        assert!(!r.ratio_condition);

        assert!(matches!(
            root_of_unity_checks(&SymplecticMatrix::identity(1)),
            Err(Error::NonSeparable)
        ));
    }

    #[test]
    fn ratio_condition_detects_negated_pair() {
        // roots {l, 1/l, -l, -1/l}: ratio -1 is a root of unity
        let f = IntPoly::from_i64(&[1, -6, 1]).mul(&IntPoly::from_i64(&[1, 6, 1]));
        let r = root_of_unity_checks_poly(&f).unwrap();
        assert!(r.ergodic);
        assert!(!r.ratio_condition);
        assert!(r.ratio_cyclotomic_divisors.contains(&2));
    }
}
