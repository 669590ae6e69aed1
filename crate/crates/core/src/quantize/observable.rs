//! Trigonometric-polynomial observables and their quantization
//! `Op(f) = sum f^(n) T(n)`.

use super::operator::{CMat, DenseOperator, OperatorKind};
use super::phase::PhaseTable;
use super::state::dimension;
use super::translation::{reduce_twist, Translation};
use crate::symplectic::FrequencyVector;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Finitely many Fourier modes `n -> f^(n)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ObservableSpec {
    #[serde(with = "mode_list")]
    pub fourier: BTreeMap<FrequencyVector, Complex64>,
}

mod mode_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Mode {
        n: Vec<i64>,
        coeff: [f64; 2],
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<FrequencyVector, Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Mode> = m.iter().map(|(k, c)| Mode { n: k.0.clone(), coeff: [c.re, c.im] }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<FrequencyVector, Complex64>, D::Error> {
        let v: Vec<Mode> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|m| (FrequencyVector(m.n), Complex64::new(m.coeff[0], m.coeff[1]))).collect())
    }
}

impl ObservableSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_mode(mut self, n: FrequencyVector, c: Complex64) -> Self {
        *self.fourier.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        self
    }

    pub fn constant(g: usize, c: f64) -> Self {
        Self::new().with_mode(FrequencyVector::zero(g), Complex64::new(c, 0.0))
    }

    /// `f(x) = e(n.x)`.
    pub fn mode(n: FrequencyVector) -> Self {
        Self::new().with_mode(n, Complex64::new(1.0, 0.0))
    }

    /// `f(x) = cos(2 pi n.x)`.
    pub fn cosine(n: FrequencyVector) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let neg = n.neg();
        Self::new().with_mode(n, half).with_mode(neg, half)
    }

    pub fn genus(&self) -> Option<usize> {
        self.fourier.keys().next().map(|k| k.genus())
    }

    pub fn mean(&self) -> Complex64 {
        self.fourier
            .iter()
            .filter(|(k, _)| k.is_zero())
            .map(|(_, c)| *c)
            .sum()
    }

    /// `f^(-n) = conj(f^(n))` for every stored mode.
    pub fn is_real(&self) -> bool {
        self.fourier.iter().all(|(k, c)| {
            let other = self.fourier.get(&k.neg()).copied().unwrap_or(Complex64::new(0.0, 0.0));
            (other - c.conj()).norm() <= 1e-14 * c.norm().max(1.0)
        })
    }
}

/// `Op_{N,r}(f)` as a dense matrix.
pub fn op_assemble(n: u64, r: i64, f: &ObservableSpec) -> Result<DenseOperator> {
    let g = f
        .genus()
        .ok_or_else(|| Error::InvalidInput("observable has no Fourier modes".into()))?;
    let rr = reduce_twist(r, n)?;
    let d = dimension(n, g);
    let table = PhaseTable::new(2 * n);
    let mut m = CMat::zeros(d, d);
    for (k, c) in &f.fourier {
        if k.genus() != g {
            return Err(Error::InvalidInput("observable modes have mixed lengths".into()));
        }
        let freq: Vec<u64> = k.0.iter().map(|&x| crate::arith::modular::reduce_i64(x, 2 * n)).collect();
        let t = Translation::from_reduced(n, rr, &freq);
        for q in 0..d {
            m[(q, t.column[q] as usize)] += c * table.get(t.phase[q] as u64);
        }
    }
    Ok(DenseOperator::new(n, g, OperatorKind::Observable, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::operator::diff_norm;

    #[test]
    fn constant_is_identity() {
        let op = op_assemble(5, 1, &ObservableSpec::constant(1, 1.0)).unwrap();
        assert_eq!(diff_norm(&op.matrix, &CMat::identity(5, 5)), 0.0);
    }

    #[test]
    fn single_mode_is_translation() {
        let n = FrequencyVector::new(vec![2, 3]);
        let op = op_assemble(7, 1, &ObservableSpec::mode(n.clone())).unwrap();
        let t = Translation::new(7, 1, &n.0).unwrap().to_dense();
        assert_eq!(diff_norm(&op.matrix, &t.matrix), 0.0);
    }

    #[test]
    fn real_symbol_gives_hermitian_operator() {
        let f = ObservableSpec::cosine(FrequencyVector::new(vec![1, 2]))
            .with_mode(FrequencyVector::new(vec![0, 1]), Complex64::new(0.3, 0.2))
            .with_mode(FrequencyVector::new(vec![0, -1]), Complex64::new(0.3, -0.2));
        assert!(f.is_real());
        for n in [4u64, 5, 9] {
            let op = op_assemble(n, 1, &f).unwrap();
            assert!(op.hermiticity_residual() < 1e-12);
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = ObservableSpec::cosine(FrequencyVector::new(vec![1, 0]));
        let s = serde_json::to_string(&f).unwrap();
        let back: ObservableSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
    }
}
