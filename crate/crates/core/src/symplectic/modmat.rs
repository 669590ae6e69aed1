//! Dense square matrices over `Z/mZ`.

use crate::arith::modular::{add_mod, mul_mod};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    pub dim: usize,
    pub modulus: u64,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn identity(dim: usize, modulus: u64) -> Self {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1 % modulus;
        }
        ModMatrix { dim, modulus, data }
    }

    pub fn zero(dim: usize, modulus: u64) -> Self {
        ModMatrix {
            dim,
            modulus,
            data: vec![0; dim * dim],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.dim + j] = v % self.modulus;
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        debug_assert_eq!(self.dim, other.dim);
        debug_assert_eq!(self.modulus, other.modulus);
        let d = self.dim;
        let m = self.modulus;
        let mut out = ModMatrix::zero(d, m);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let b = other.data[k * d + j];
                    if b != 0 {
                        out.data[i * d + j] = add_mod(out.data[i * d + j], mul_mod(a, b, m), m);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &ModMatrix) -> ModMatrix {
        let m = self.modulus;
        ModMatrix {
            dim: self.dim,
            modulus: m,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| add_mod(a, b, m))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u64) -> ModMatrix {
        self.pow_u128(exp as u128)
    }

    pub fn pow_u128(&self, mut exp: u128) -> ModMatrix {
        let mut base = self.clone();
        let mut acc = ModMatrix::identity(self.dim, self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| (0..d).all(|j| self.data[i * d + j] == u64::from(i == j) % self.modulus))
    }

    /// Reduce to a smaller modulus dividing the current one.
    pub fn reduce(&self, modulus: u64) -> ModMatrix {
        ModMatrix {
            dim: self.dim,
            modulus,
            data: self.data.iter().map(|&v| v % modulus).collect(),
        }
    }

    /// Row vector times matrix: `v M`.
    pub fn row_mul(&self, v: &[u64]) -> Vec<u64> {
        let d = self.dim;
        let m = self.modulus;
        let mut out = vec![0u64; d];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for j in 0..d {
                out[j] = add_mod(out[j], mul_mod(a, self.data[k * d + j], m), m);
            }
        }
        out
    }
}
