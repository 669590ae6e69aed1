//! Translation operators
//! `(T(n) phi)(Q) = e_{2N}(r n1.n2) e_N(r n2.Q) phi(Q + n1)`.

use super::operator::{CMat, DenseOperator, OperatorKind};
use super::phase::PhaseTable;
use super::state::{decode, dimension, encode, StateVector};
use crate::arith::modular::{gcd, reduce_i64};
use crate::{Error, Result};
use num_complex::Complex64;

/// Twist `r` reduced modulo `2N`, after checking `gcd(r, N) = 1`.
pub fn reduce_twist(r: i64, n: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    let rr = reduce_i64(r, 2 * n);
    if gcd(rr % n.max(1), n) != 1 && n > 1 {
        return Err(Error::InvalidInput(format!("twist {r} is not coprime to N = {n}")));
    }
    Ok(rr)
}

/// Exponent of `e_{2N}` in row `Q` of `T(n)`: `r n1.n2 + 2 r n2.Q mod 2N`.
/// Frequencies are taken modulo `2N`.
#[inline]
pub fn phase_exponent(freq: &[u64], q: &[u64], r: u64, n: u64) -> u64 {
    let m = 2 * n as u128;
    let g = q.len();
    let r = r as u128;
    let mut acc: u128 = 0;
    for i in 0..g {
        acc += r * (freq[i] as u128 % m) * (freq[g + i] as u128 % m) % m;
        acc += 2 * r * (freq[g + i] as u128 % m) * q[i] as u128 % m;
    }
    (acc % m) as u64
}

/// A translation operator stored as a monomial matrix: row `Q` has its
/// single nonzero entry `e_{2N}(phase[Q])` in column `Q + n1`.
#[derive(Clone, Debug)]
pub struct Translation {
    pub n: u64,
    pub g: usize,
    pub r: u64,
    /// Frequency reduced modulo `2N`.
    pub freq: Vec<u64>,
    pub column: Vec<u32>,
    pub phase: Vec<u32>,
}

impl Translation {
    pub fn new(n: u64, r: i64, freq: &[i64]) -> Result<Self> {
        if freq.len() % 2 != 0 || freq.is_empty() {
            return Err(Error::InvalidInput("frequency must have even length 2g".into()));
        }
        let r = reduce_twist(r, n)?;
        let f: Vec<u64> = freq.iter().map(|&x| reduce_i64(x, 2 * n)).collect();
        Ok(Self::from_reduced(n, r, &f))
    }

    /// Build from a frequency already reduced modulo `2N` and a reduced twist.
    pub fn from_reduced(n: u64, r: u64, freq: &[u64]) -> Self {
        let g = freq.len() / 2;
        let d = dimension(n, g);
        let mut column = Vec::with_capacity(d);
        let mut phase = Vec::with_capacity(d);
        let shift: Vec<u64> = freq[..g].iter().map(|&x| x % n).collect();
        for idx in 0..d {
            let q = decode(idx, n, g);
            let target: Vec<u64> = q.iter().zip(&shift).map(|(a, b)| (a + b) % n).collect();
            column.push(encode(&target, n) as u32);
            phase.push(phase_exponent(freq, &q, r, n) as u32);
        }
        Translation { n, g, r, freq: freq.to_vec(), column, phase }
    }

    pub fn dim(&self) -> usize {
        self.column.len()
    }

    pub fn apply_slice(&self, v: &[Complex64], table: &PhaseTable) -> Vec<Complex64> {
        (0..self.dim())
            .map(|q| table.get(self.phase[q] as u64) * v[self.column[q] as usize])
            .collect()
    }

    pub fn apply(&self, phi: &StateVector) -> StateVector {
        let table = PhaseTable::new(2 * self.n);
        StateVector { n: self.n, g: self.g, amplitudes: self.apply_slice(&phi.amplitudes, &table) }
    }

    /// `T M` for a dense `M`, in `O(D^2)`.
    pub fn left_mul(&self, m: &CMat, table: &PhaseTable) -> CMat {
        CMat::from_fn(m.nrows(), m.ncols(), |i, j| {
            table.get(self.phase[i] as u64) * m[(self.column[i] as usize, j)]
        })
    }

    /// `M T` for a dense `M`.
    pub fn right_mul(&self, m: &CMat, table: &PhaseTable) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(m.nrows(), d);
        for q in 0..d {
            let c = self.column[q] as usize;
            let ph = table.get(self.phase[q] as u64);
            for i in 0..m.nrows() {
                out[(i, c)] += m[(i, q)] * ph;
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseOperator {
        let table = PhaseTable::new(2 * self.n);
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for q in 0..d {
            m[(q, self.column[q] as usize)] = table.get(self.phase[q] as u64);
        }
        DenseOperator::new(self.n, self.g, OperatorKind::Translation, m)
    }

    pub fn trace(&self) -> Complex64 {
        let table = PhaseTable::new(2 * self.n);
        (0..self.dim())
            .filter(|&q| self.column[q] as usize == q)
            .map(|q| table.get(self.phase[q] as u64))
            .sum()
    }

    /// Whether two translations are equal as operators.
    pub fn same_operator(&self, other: &Translation) -> bool {
        self.column == other.column && self.phase == other.phase
    }
}

/// Apply `T_N^{(r)}(n)` to a state.
pub fn translation_apply(n: u64, r: i64, freq: &[i64], phi: &StateVector) -> Result<StateVector> {
    let t = Translation::new(n, r, freq)?;
    if phi.n != n || phi.g != t.g {
        return Err(Error::InvalidInput("state does not live in H_N for this frequency".into()));
    }
    Ok(t.apply(phi))
}

/// `omega(m, n) = m1.n2 - m2.n1` over the integers.
pub fn omega(m: &[i64], n: &[i64]) -> i64 {
    crate::symplectic::matrix::omega_i64(m, n)
}

/// Frobenius residuals of the algebraic laws for one pair of frequencies.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LawResiduals {
    /// `T(m) T(k) = e_{2N}(r omega(m, k)) T(m + k)`.
    pub composition: f64,
    /// `T(m) T(k) = e_N(r omega(m, k)) T(k) T(m)`.
    pub commutation: f64,
    /// `T(m)^N = (-1)^{r N m1.m2} I`.
    pub power: f64,
    /// `T(0) = I`.
    pub identity: f64,
}

pub fn law_residuals(n: u64, r: i64, m: &[i64], k: &[i64]) -> Result<LawResiduals> {
    if m.len() != k.len() {
        return Err(Error::InvalidInput("frequencies of different length".into()));
    }
    let g = m.len() / 2;
    let dense = |f: &[i64]| Translation::new(n, r, f).map(|t| t.to_dense().matrix);
    let (tm, tk) = (dense(m)?, dense(k)?);
    let sum: Vec<i64> = m.iter().zip(k).map(|(a, b)| a + b).collect();
    let w = omega(m, k) as i128 * r as i128;
    let two_n = 2 * n as i128;
    let ph = |e: i128| super::phase::root_of_unity(e.rem_euclid(two_n) as u64, 2 * n);
    let lhs = &tm * &tk;
    let composition = (&lhs - dense(&sum)? * faer::Scale(ph(w))).norm_l2();
    let commutation = (&lhs - (&tk * &tm) * faer::Scale(ph(2 * w))).norm_l2();
    let d = tm.nrows();
    let mut pw = CMat::identity(d, d);
    for _ in 0..n {
        pw = &pw * &tm;
    }
    let dot: i128 = (0..g).map(|i| m[i] as i128 * m[g + i] as i128).sum();
    let sign = if (r as i128 * n as i128 * dot).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let power = (pw - CMat::identity(d, d) * faer::Scale(Complex64::new(sign, 0.0))).norm_l2();
    let identity = (dense(&vec![0; 2 * g])? - CMat::identity(d, d)).norm_l2();
    Ok(LawResiduals { composition, commutation, power, identity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::operator::diff_norm;
    use super::super::phase::root_of_unity;

    fn dense(n: u64, r: i64, f: &[i64]) -> CMat {
        Translation::new(n, r, f).unwrap().to_dense().matrix
    }

    #[test]
    fn zero_frequency_is_identity() {
        let t = dense(5, 1, &[0, 0]);
        assert_eq!(diff_norm(&t, &CMat::identity(5, 5)), 0.0);
    }

    #[test]
    fn composition_and_commutation() {
        for n in [3u64, 4, 6, 7] {
            for r in [1i64, -1, 5] {
                if gcd(reduce_i64(r, n), n) != 1 {
                    continue;
                }
                for m in [[1i64, 0], [2, 3], [-1, 4]] {
                    for k in [[0i64, 1], [3, -2], [5, 5]] {
                        let lhs = &dense(n, r, &m) * &dense(n, r, &k);
                        let sum = [m[0] + k[0], m[1] + k[1]];
                        let ph = root_of_unity(reduce_i64(r * omega(&m, &k), 2 * n), 2 * n);
                        let rhs = dense(n, r, &sum) * faer::Scale(ph);
                        assert!(diff_norm(&lhs, &rhs) < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn law_report() {
        for n in [3u64, 4, 5, 9] {
            for m in [[1i64, 0], [2, 3], [-1, 1]] {
                let l = law_residuals(n, 1, &m, &[3, -2]).unwrap();
                assert!(l.composition < 1e-12 && l.commutation < 1e-12 && l.power < 1e-12, "{n} {m:?} {l:?}");
                assert_eq!(l.identity, 0.0);
            }
        }
        let l = law_residuals(5, 2, &[1, 0, 2, 1], &[0, 1, 1, 1]).unwrap();
        assert!(l.composition < 1e-12 && l.commutation < 1e-12 && l.power < 1e-12);
    }

    #[test]
    fn nth_power_sign() {
        let t = dense(3, 1, &[1, 1]);
        let mut p = CMat::identity(3, 3);
        for _ in 0..3 {
            p = &p * &t;
        }
        let minus = CMat::identity(3, 3) * faer::Scale(Complex64::new(-1.0, 0.0));
        assert!(diff_norm(&p, &minus) < 1e-12);
    }

    #[test]
    fn twist_must_be_coprime() {
        assert!(Translation::new(6, 3, &[1, 0]).is_err());
        assert!(Translation::new(6, -1, &[1, 0]).is_ok());
    }

    #[test]
    fn left_and_right_products_match_dense() {
        let t = Translation::new(5, 2, &[2, 3]).unwrap();
        let table = PhaseTable::new(10);
        let m = CMat::from_fn(5, 5, |i, j| Complex64::new(i as f64, j as f64 * 0.5));
        let td = t.to_dense().matrix;
        assert!(diff_norm(&t.left_mul(&m, &table), &(&td * &m)) < 1e-12);
        assert!(diff_norm(&t.right_mul(&m, &table), &(&m * &td)) < 1e-12);
    }
}
