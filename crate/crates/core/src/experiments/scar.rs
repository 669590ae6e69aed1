//! Scars: matrices with an invariant isotropic subspace keep large matrix
//! elements along frequencies in that subspace.

use crate::counting::bounds::max_translation_element;
use crate::quantize::solve_and_decompose;
use crate::symplectic::{char_poly_info, invariant_subspace_split, FrequencyVector, SubspaceDescriptor, SymplecticMatrix};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScarPoint {
    #[serde(rename = "N")]
    pub n: u64,
    pub value: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScarReport {
    pub isotropic: SubspaceDescriptor,
    pub separable: bool,
    pub freq: Vec<i64>,
    pub points: Vec<ScarPoint>,
    /// Smallest value over the points that succeeded.
    pub min_value: f64,
    pub control_matrix: Vec<Vec<i64>>,
    pub control_freq: Vec<i64>,
    pub control: Vec<ScarPoint>,
}

/// The primitive integer vector on the line through a rational vector.
pub fn primitive_integer(v: &[num_rational::BigRational]) -> Option<Vec<i64>> {
    let den = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    ints.iter().map(|x| i64::try_from(x / &g).ok()).collect()
}

fn measure(a: &SymplecticMatrix, ns: &[u64], freq: &[i64]) -> Vec<ScarPoint> {
    ns.iter()
        .map(|&n| match solve_and_decompose(a, n, 1).and_then(|p| max_translation_element(&p, freq)) {
            Ok(value) => ScarPoint { n, value, error: None },
            Err(e) => ScarPoint { n, value: f64::NAN, error: Some(e.to_string()) },
        })
        .collect()
}

/// Matrix elements of `T_N(n)` for `n` in the invariant isotropic subspace of
/// `a`, next to those of `control` along `control_freq` on the same `N`.
pub fn scar_demo(
    a: &SymplecticMatrix,
    ns: &[u64],
    freq: Option<&FrequencyVector>,
    control: &SymplecticMatrix,
    control_freq: &FrequencyVector,
) -> Result<ScarReport> {
    let split = invariant_subspace_split(a)?;
    let iso = split
        .isotropic_witness
        .ok_or_else(|| Error::Precondition("matrix has no invariant isotropic subspace".into()))?;
    let freq = match freq {
        Some(f) => f.0.clone(),
        None => iso
            .basis
            .first()
            .and_then(|v| primitive_integer(v))
            .ok_or_else(|| Error::Numerical("isotropic basis vector is not representable".into()))?,
    };
    if freq.len() != a.dim() || control_freq.0.len() != control.dim() {
        return Err(Error::InvalidInput("frequency length must be 2g".into()));
    }
    let separable = char_poly_info(a)?.separable;
    let points = measure(a, ns, &freq);
    let min_value = points.iter().filter(|p| p.error.is_none()).map(|p| p.value).fold(f64::INFINITY, f64::min);
    let control_pts = measure(control, ns, &control_freq.0);
    let control_matrix = control.to_i64().ok_or_else(|| Error::BoundExceeded("control entries exceed i64".into()))?;
    Ok(ScarReport {
        isotropic: iso,
        separable,
        freq,
        points,
        min_value,
        control_matrix,
        control_freq: control_freq.0.clone(),
        control: control_pts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::catalog::{a1, a2, a3};

    #[test]
    fn a3_scars() {
        let r = scar_demo(&a3(), &[5, 9, 15], None, &a1(), &FrequencyVector::new(vec![1, 0])).unwrap();
        assert!(!r.separable);
        assert!(r.min_value >= 0.3, "{r:?}");
        assert_eq!(r.control.len(), 3);
    }

    #[test]
    fn a2_refuses() {
        let r = scar_demo(&a2(), &[5], None, &a1(), &FrequencyVector::new(vec![1, 0]));
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
