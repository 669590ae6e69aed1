//! The classical map: integer symplectic matrices.

use super::modmat::ModMatrix;
use crate::arith::modular::reduce_i64;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// An integer `2g x 2g` matrix preserving `omega(x, y) = x1.y2 - x2.y1`.
///
/// Frequencies are row vectors and the map acts on the right, `n -> n A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymplecticMatrix {
    g: usize,
    entries: Vec<Vec<BigInt>>,
    parity: bool,
}

/// The standard symplectic Gram matrix `J = [[0, I], [-I, 0]]`.
pub fn symplectic_form(g: usize) -> Vec<Vec<BigInt>> {
    let d = 2 * g;
    let mut j = vec![vec![BigInt::zero(); d]; d];
    for i in 0..g {
        j[i][g + i] = BigInt::one();
        j[g + i][i] = -BigInt::one();
    }
    j
}

/// `omega(x, y)` for integer vectors.
pub fn omega_i64(x: &[i64], y: &[i64]) -> i64 {
    let g = x.len() / 2;
    (0..g).map(|i| x[i] * y[g + i] - x[g + i] * y[i]).sum()
}

pub(crate) fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub(crate) fn transpose(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

impl SymplecticMatrix {
    /// Validate a raw integer matrix.
    ///
    /// Fails with [`Error::NotSymplectic`] unless `A^t J A = J`. The parity
    /// flag records whether `A = I mod 2`; it is not an error for it to be
    /// false, but quantization needs it (see [`Self::parity_reduce`]).
    pub fn validate(rows: Vec<Vec<BigInt>>, g: usize) -> Result<Self> {
        let d = 2 * g;
        if g == 0 {
            return Err(Error::InvalidInput("genus must be positive".into()));
        }
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput(format!(
                "expected a {d}x{d} matrix for g = {g}"
            )));
        }
        let j = symplectic_form(g);
        let lhs = mat_mul(&mat_mul(&transpose(&rows), &j), &rows);
        if lhs != j {
            return Err(Error::NotSymplectic("A^t J A != J".into()));
        }
        let parity = (0..d).all(|i| {
            (0..d).all(|k| {
                let v: BigInt = &rows[i][k] - BigInt::from(u8::from(i == k));
                (v % 2u32).is_zero()
            })
        });
        Ok(SymplecticMatrix {
            g,
            entries: rows,
            parity,
        })
    }

    pub fn from_i64(rows: &[Vec<i64>], g: usize) -> Result<Self> {
        Self::validate(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
            g,
        )
    }

    /// Infers `g` from the row count.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        if rows.is_empty() || rows.len() % 2 != 0 {
            return Err(Error::InvalidInput("matrix must be 2g x 2g".into()));
        }
        Self::from_i64(rows, rows.len() / 2)
    }

    pub fn identity(g: usize) -> Self {
        let d = 2 * g;
        let rows = (0..d)
            .map(|i| (0..d).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        SymplecticMatrix {
            g,
            entries: rows,
            parity: true,
        }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn parity_ok(&self) -> bool {
        self.parity
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    /// Entries as `i64` when they fit.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|v| v.to_i64()).collect())
            .collect()
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        let entries = mat_mul(&self.entries, &other.entries);
        SymplecticMatrix {
            g: self.g,
            entries,
            parity: self.parity && other.parity,
        }
        .with_recomputed_parity()
    }

    pub fn pow(&self, k: u64) -> SymplecticMatrix {
        let mut acc = SymplecticMatrix::identity(self.g);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Inverse `J^{-1} A^t J`, exact for symplectic matrices.
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = symplectic_form(self.g);
        let neg_j: Vec<Vec<BigInt>> = j.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        let entries = mat_mul(&mat_mul(&neg_j, &transpose(&self.entries)), &j);
        SymplecticMatrix {
            g: self.g,
            entries,
            parity: self.parity,
        }
    }

    fn with_recomputed_parity(mut self) -> Self {
        let d = self.dim();
        self.parity = (0..d).all(|i| {
            (0..d).all(|k| {
                let v: BigInt = &self.entries[i][k] - BigInt::from(u8::from(i == k));
                (v % 2u32).is_zero()
            })
        });
        self
    }

    /// Reduction modulo `m`.
    pub fn to_mod(&self, m: u64) -> ModMatrix {
        let d = self.dim();
        let mb = BigInt::from(m);
        let mut out = ModMatrix::zero(d, m);
        for i in 0..d {
            for j in 0..d {
                let r = ((&self.entries[i][j] % &mb) + &mb) % &mb;
                out.data[i * d + j] = r.to_u64().expect("residue fits");
            }
        }
        out
    }

    /// Row vector times matrix over the integers, reduced modulo `m`.
    pub fn row_image_mod(&self, n: &[i64], m: u64) -> Vec<u64> {
        let v: Vec<u64> = n.iter().map(|&x| reduce_i64(x, m)).collect();
        self.to_mod(m).row_mul(&v)
    }

    /// Minimal `k >= 1` with `A^k = I mod 2`, together with `A^k`.
    ///
    /// `k` divides the order of `Sp(2g, F_2)`, so the search always stops.
    pub fn parity_reduce(&self) -> (u64, SymplecticMatrix) {
        let m2 = self.to_mod(2);
        let mut acc = m2.clone();
        let mut k = 1u64;
        while !acc.is_identity() {
            acc = acc.mul(&m2);
            k += 1;
        }
        (k, self.pow(k))
    }

    /// Direct sum of two symplectic matrices: coordinates are ordered as
    /// `(q_a, q_b, p_a, p_b)`.
    pub fn direct_sum(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        let (ga, gb) = (self.g, other.g);
        let g = ga + gb;
        let d = 2 * g;
        let place_a = |i: usize| if i < ga { i } else { g + (i - ga) };
        let place_b = |i: usize| if i < gb { ga + i } else { g + ga + (i - gb) };
        let mut rows = vec![vec![BigInt::zero(); d]; d];
        for i in 0..2 * ga {
            for j in 0..2 * ga {
                rows[place_a(i)][place_a(j)] = self.entries[i][j].clone();
            }
        }
        for i in 0..2 * gb {
            for j in 0..2 * gb {
                rows[place_b(i)][place_b(j)] = other.entries[i][j].clone();
            }
        }
        SymplecticMatrix::validate(rows, g).expect("direct sum of symplectic matrices")
    }

    /// `diag(M, (M^t)^{-1})` for a unimodular `g x g` integer matrix `M`.
    pub fn position_block(m: &[Vec<i64>]) -> Result<SymplecticMatrix> {
        let g = m.len();
        let mb: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let inv = super::linalg::integer_inverse(&mb).ok_or_else(|| {
            Error::InvalidInput("position block must be unimodular".into())
        })?;
        let inv_t = transpose(&inv);
        let d = 2 * g;
        let mut rows = vec![vec![BigInt::zero(); d]; d];
        for i in 0..g {
            for j in 0..g {
                rows[i][j] = mb[i][j].clone();
                rows[g + i][g + j] = inv_t[i][j].clone();
            }
        }
        SymplecticMatrix::validate(rows, g)
    }

    /// Largest absolute entry, as a float (for diagnostics).
    pub fn max_abs_entry(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|v| v.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

/// Matrices used throughout the examples and tests.
pub mod catalog {
    use super::SymplecticMatrix;

    /// `[[1, 2], [2, 5]]`, characteristic polynomial `x^2 - 6x + 1`.
    pub fn a1() -> SymplecticMatrix {
        SymplecticMatrix::from_rows(&[vec![1, 2], vec![2, 5]]).unwrap()
    }

    /// `[[1, 4], [4, 17]]`, characteristic polynomial `x^2 - 18x + 1`.
    pub fn b2() -> SymplecticMatrix {
        SymplecticMatrix::from_rows(&[vec![1, 4], vec![4, 17]]).unwrap()
    }

    /// Genus-2 block matrix: `a1` on coordinates (1, 3), `b2` on (2, 4).
    pub fn a2() -> SymplecticMatrix {
        a1().direct_sum(&b2())
    }

    /// `diag(M, (M^t)^{-1})` with `M = [[3, 2], [4, 3]]`: leaves the position
    /// plane invariant and isotropic.
    pub fn a3() -> SymplecticMatrix {
        SymplecticMatrix::position_block(&[vec![3, 2], vec![4, 3]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    #[test]
    fn validate_examples() {
        let a = a1();
        assert!(a.parity_ok());
        assert!(SymplecticMatrix::identity(3).parity_ok());
        let b = SymplecticMatrix::from_rows(&[vec![2, 1], vec![3, 2]]).unwrap();
        assert!(!b.parity_ok());
        let bad = SymplecticMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert!(matches!(bad, Err(Error::NotSymplectic(_))));
    }

    #[test]
    fn parity_reduction() {
        assert_eq!(a1().parity_reduce().0, 1);
        let b = SymplecticMatrix::from_rows(&[vec![2, 1], vec![3, 2]]).unwrap();
        let (k, bk) = b.parity_reduce();
        assert_eq!(k, 2);
        assert!(bk.parity_ok());
        // |SL(2, F_2)| = 6
        assert_eq!(6 % k, 0);
    }

    #[test]
    fn block_matrices() {
        let a2 = a2();
        assert_eq!(a2.genus(), 2);
        assert_eq!(a2.to_i64().unwrap()[0], vec![1, 0, 2, 0]);
        assert_eq!(a2.to_i64().unwrap()[1], vec![0, 1, 0, 4]);
        let a3 = a3();
        assert!(a3.parity_ok());
        assert_eq!(
            a3.to_i64().unwrap(),
            vec![
                vec![3, 2, 0, 0],
                vec![4, 3, 0, 0],
                vec![0, 0, 3, -4],
                vec![0, 0, -2, 3]
            ]
        );
    }

    #[test]
    fn inverse_is_exact() {
        let a = a2();
        let prod = a.mul(&a.inverse());
        assert_eq!(prod, SymplecticMatrix::identity(2));
    }
}
