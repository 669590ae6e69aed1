//! States in `H_N = L^2((Z/NZ)^g)`.

use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Index of `Q in (Z/NZ)^g` with `Q_1` most significant.
pub fn encode(q: &[u64], n: u64) -> usize {
    q.iter().fold(0usize, |acc, &c| acc * n as usize + (c % n) as usize)
}

pub fn decode(mut idx: usize, n: u64, g: usize) -> Vec<u64> {
    let mut q = vec![0u64; g];
    for slot in q.iter_mut().rev() {
        *slot = (idx % n as usize) as u64;
        idx /= n as usize;
    }
    q
}

pub fn dimension(n: u64, g: usize) -> usize {
    (n as usize).pow(g as u32)
}

/// Amplitudes indexed by `(Z/NZ)^g`, with the inner product
/// `<phi, psi> = N^{-g} sum phi(Q) conj(psi(Q))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    #[serde(rename = "N")]
    pub n: u64,
    pub g: usize,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: u64, g: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dimension(n, g) {
            return Err(Error::InvalidInput(format!(
                "state of length {} does not match N^g = {}",
                amplitudes.len(),
                dimension(n, g)
            )));
        }
        Ok(StateVector { n, g, amplitudes })
    }

    pub fn zeros(n: u64, g: usize) -> Self {
        StateVector { n, g, amplitudes: vec![Complex64::new(0.0, 0.0); dimension(n, g)] }
    }

    /// `N^{g/2} delta_u`, which has norm one.
    pub fn normalized_delta(n: u64, g: usize, u: &[u64]) -> Self {
        let mut s = Self::zeros(n, g);
        s.amplitudes[encode(u, n)] = Complex64::new((n as f64).powf(g as f64 / 2.0), 0.0);
        s
    }

    pub fn constant(n: u64, g: usize, c: Complex64) -> Self {
        StateVector { n, g, amplitudes: vec![c; dimension(n, g)] }
    }

    pub fn random<R: Rng>(n: u64, g: usize, rng: &mut R) -> Self {
        let amplitudes = (0..dimension(n, g))
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        StateVector { n, g, amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        let s: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a * b.conj())
            .sum();
        s / self.dim() as f64
    }

    pub fn norm(&self) -> f64 {
        (self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() / self.dim() as f64).sqrt()
    }

    pub fn scale(&self, c: Complex64) -> StateVector {
        StateVector {
            n: self.n,
            g: self.g,
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        StateVector {
            n: self.n,
            g: self.g,
            amplitudes: self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        for idx in 0..125 {
            assert_eq!(encode(&decode(idx, 5, 3), 5), idx);
        }
        assert_eq!(encode(&[1, 2], 7), 9);
    }

    #[test]
    fn delta_is_normalized() {
        let d = StateVector::normalized_delta(6, 2, &[3, 4]);
        assert!((d.norm() - 1.0).abs() < 1e-14);
    }
}
