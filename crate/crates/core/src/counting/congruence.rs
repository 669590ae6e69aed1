//! Exact counts of equal power sums: `Q_{2nu}(N; n)`, the matrix variant and
//! `R_{2nu}(d_1, ..., d_t; p)`.

use crate::arith::modular::reduce_i64;
use crate::arith::order::matrix_order;
use crate::symplectic::char_poly;
use crate::symplectic::fp_poly::{self, FpPoly};
use crate::symplectic::{FrequencyVector, ModMatrix, SymplecticMatrix};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Exhaustive enumeration runs as a cross-check when `tau^{4 nu}` is at most this.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;
/// Largest number of table updates a convolution may perform.
pub const CONVOLUTION_GUARD: u128 = 400_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Convolution,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountKind {
    /// `n sum (A^{k_i} - A^{l_i}) = 0 mod N`.
    Vector,
    /// `sum A^{k_i} = sum A^{l_i} mod N`.
    Matrix,
    /// Equal power sums of one root per irreducible factor mod `p`.
    Eigenvalue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountParams {
    /// `N`, or `p` for eigenvalue counts.
    pub modulus: u64,
    pub nu: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub freq: Option<FrequencyVector>,
    /// Degrees of the irreducible factors of `f_A mod p`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degrees: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub kind: CountKind,
    pub params: CountParams,
    pub value: u128,
    pub tau: u64,
    pub method: CountMethod,
    /// Whether the other method ran too and agreed.
    pub cross_checked: bool,
}

impl CountResult {
    /// `2 tau^2 - tau`, the number of diagonal solutions when `nu = 1`.
    pub fn diagonal_count(&self) -> u128 {
        let t = self.tau as u128;
        2 * t * t - t
    }

    pub fn upper_bound(&self) -> u128 {
        (self.tau as u128).pow(4 * self.params.nu)
    }
}

/// Which algorithm to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Convolution, cross-checked exhaustively when cheap.
    Auto,
    Convolution,
    Exhaustive,
}

fn tau_of(a: &SymplecticMatrix, n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(1);
    }
    matrix_order(a, n)?
        .order_u64()
        .ok_or_else(|| Error::BoundExceeded("ord(A, N) exceeds 64 bits".into()))
}

/// `#{(k, l) in [0, len)^{2 nu} x [0, len)^{2 nu} : sum v_k = sum v_l}`
/// via `sum_v c(v)^2`, where `c` counts ordered `2 nu`-tuples with sum `v`.
pub fn count_by_convolution(vectors: &[Vec<u64>], modulus: u64, nu: u32) -> Result<u128> {
    let width = vectors.first().map_or(0, Vec::len);
    let mut table: HashMap<Vec<u64>, u128> = HashMap::new();
    table.insert(vec![0; width], 1);
    let mut work: u128 = 0;
    for _ in 0..2 * nu {
        work += table.len() as u128 * vectors.len() as u128;
        if work > CONVOLUTION_GUARD {
            return Err(Error::ResourceGuard(format!(
                "convolution exceeds {CONVOLUTION_GUARD} updates; lower nu or N"
            )));
        }
        let mut next: HashMap<Vec<u64>, u128> = HashMap::with_capacity(table.len() * 2);
        for (key, &c) in &table {
            for v in vectors {
                let s: Vec<u64> = key.iter().zip(v).map(|(a, b)| (a + b) % modulus).collect();
                *next.entry(s).or_insert(0) += c;
            }
        }
        table = next;
    }
    Ok(table.values().map(|c| c * c).sum())
}

/// The same count by enumerating all `len^{4 nu}` tuples.
pub fn count_exhaustive(vectors: &[Vec<u64>], modulus: u64, nu: u32) -> Result<u128> {
    let len = vectors.len();
    let slots = 4 * nu as usize;
    let total = (len as u128).checked_pow(slots as u32).unwrap_or(u128::MAX);
    if total > EXHAUSTIVE_LIMIT * 10 {
        return Err(Error::ResourceGuard(format!("{total} tuples is too many to enumerate")));
    }
    let width = vectors.first().map_or(0, Vec::len);
    let half = slots / 2;
    let mut idx = vec![0usize; slots];
    let mut count: u128 = 0;
    loop {
        let ok = (0..width).all(|c| {
            let mut s: u64 = 0;
            for (j, &k) in idx.iter().enumerate() {
                let x = vectors[k][c];
                s = if j < half { (s + x) % modulus } else { (s + modulus - x) % modulus };
            }
            s == 0
        });
        if ok {
            count += 1;
        }
        let mut j = 0;
        loop {
            if j == slots {
                return Ok(count);
            }
            idx[j] += 1;
            if idx[j] < len {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn run(vectors: &[Vec<u64>], modulus: u64, nu: u32, strategy: Strategy) -> Result<(u128, CountMethod, bool)> {
    if nu == 0 {
        return Err(Error::InvalidInput("nu must be positive".into()));
    }
    let total = (vectors.len() as u128).checked_pow(4 * nu).unwrap_or(u128::MAX);
    match strategy {
        Strategy::Exhaustive => Ok((count_exhaustive(vectors, modulus, nu)?, CountMethod::Exhaustive, false)),
        Strategy::Convolution => Ok((count_by_convolution(vectors, modulus, nu)?, CountMethod::Convolution, false)),
        Strategy::Auto => {
            let v = count_by_convolution(vectors, modulus, nu)?;
            if total <= EXHAUSTIVE_LIMIT {
                let w = count_exhaustive(vectors, modulus, nu)?;
                if v != w {
                    return Err(Error::PropertyFailed(format!("convolution count {v} != exhaustive count {w}")));
                }
                Ok((v, CountMethod::Convolution, true))
            } else {
                Ok((v, CountMethod::Convolution, false))
            }
        }
    }
}

/// `n A^k mod N` for `k = 1..tau`.
pub fn orbit_vectors(a: &SymplecticMatrix, n: u64, freq: &FrequencyVector, tau: u64) -> Vec<Vec<u64>> {
    let am = a.to_mod(n);
    let mut cur: Vec<u64> = freq.0.iter().map(|&x| reduce_i64(x, n)).collect();
    (0..tau)
        .map(|_| {
            cur = am.row_mul(&cur);
            cur.clone()
        })
        .collect()
}

pub fn q_count_vector(a: &SymplecticMatrix, n: u64, freq: &FrequencyVector, nu: u32) -> Result<CountResult> {
    q_count_vector_with(a, n, freq, nu, Strategy::Auto)
}

pub fn q_count_vector_with(
    a: &SymplecticMatrix,
    n: u64,
    freq: &FrequencyVector,
    nu: u32,
    strategy: Strategy,
) -> Result<CountResult> {
    if freq.0.len() != a.dim() {
        return Err(Error::InvalidInput("frequency length must be 2g".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    let tau = tau_of(a, n)?;
    let vectors = orbit_vectors(a, n, freq, tau);
    let (value, method, cross_checked) = run(&vectors, n, nu, strategy)?;
    Ok(CountResult {
        kind: CountKind::Vector,
        params: CountParams { modulus: n, nu, freq: Some(freq.clone()), degrees: None },
        value,
        tau,
        method,
        cross_checked,
    })
}

pub fn q_count_matrix(a: &SymplecticMatrix, n: u64, nu: u32) -> Result<CountResult> {
    q_count_matrix_with(a, n, nu, Strategy::Auto)
}

pub fn q_count_matrix_with(a: &SymplecticMatrix, n: u64, nu: u32, strategy: Strategy) -> Result<CountResult> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    let tau = tau_of(a, n)?;
    let am = a.to_mod(n);
    let mut cur = ModMatrix::identity(a.dim(), n);
    let vectors: Vec<Vec<u64>> = (0..tau)
        .map(|_| {
            cur = cur.mul(&am);
            cur.data.clone()
        })
        .collect();
    let (value, method, cross_checked) = run(&vectors, n, nu, strategy)?;
    Ok(CountResult {
        kind: CountKind::Matrix,
        params: CountParams { modulus: n, nu, freq: None, degrees: None },
        value,
        tau,
        method,
        cross_checked,
    })
}

/// Irreducible factors of `f_A mod p`, after checking `p` does not divide the discriminant.
pub fn factors_mod_p(a: &SymplecticMatrix, p: u64) -> Result<Vec<FpPoly>> {
    if p < 3 || !crate::arith::factor::is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let f = char_poly(a);
    let fp = f.to_mod(p);
    if !fp_poly::is_squarefree(&fp, p) {
        return Err(Error::Ramified { p });
    }
    Ok(fp_poly::factor_squarefree(&fp, p))
}

pub fn r_count(a: &SymplecticMatrix, p: u64, nu: u32) -> Result<CountResult> {
    r_count_with(a, p, nu, Strategy::Auto)
}

/// `R_{2nu}`: tuples in `[1, ord(A, p)]^{4 nu}` whose power sums of `x` agree in
/// every `F_p[x]/(h_i)`.
pub fn r_count_with(a: &SymplecticMatrix, p: u64, nu: u32, strategy: Strategy) -> Result<CountResult> {
    let factors = factors_mod_p(a, p)?;
    let tau = tau_of(a, p)?;
    let degrees: Vec<usize> = factors.iter().map(|h| fp_poly::degree(h)).collect();
    let x: FpPoly = vec![0, 1];
    let mut powers: Vec<FpPoly> = factors.iter().map(|_| vec![1]).collect();
    let vectors: Vec<Vec<u64>> = (0..tau)
        .map(|_| {
            let mut key = Vec::new();
            for ((pw, h), &d) in powers.iter_mut().zip(&factors).zip(&degrees) {
                *pw = fp_poly::mulmod(pw, &x, h, p);
                let mut c = pw.clone();
                c.resize(d, 0);
                key.extend(c);
            }
            key
        })
        .collect();
    let (value, method, cross_checked) = run(&vectors, p, nu, strategy)?;
    Ok(CountResult {
        kind: CountKind::Eigenvalue,
        params: CountParams { modulus: p, nu, freq: None, degrees: Some(degrees) },
        value,
        tau,
        method,
        cross_checked,
    })
}

/// `Q p^{2g} / tau^{4 nu}`, the realized constant in `Q << tau^{4 nu} / p^{2g}`.
pub fn realized_constant(c: &CountResult, g: usize) -> f64 {
    c.value as f64 * (c.params.modulus as f64).powi(2 * g as i32) / (c.tau as f64).powi(4 * c.params.nu as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::catalog::{a1, a2};
    use super::Strategy;
    use proptest::prelude::*;

    fn fv(v: &[i64]) -> FrequencyVector {
        FrequencyVector::new(v.to_vec())
    }

    #[test]
    fn n7_examples() {
        let q = q_count_vector(&a1(), 7, &fv(&[1, 0]), 1).unwrap();
        assert_eq!(q.value, 15);
        assert_eq!(q.tau, 3);
        assert!(q.cross_checked);
        assert_eq!(q.value, q.diagonal_count());
        let e = q_count_vector_with(&a1(), 7, &fv(&[1, 0]), 1, Strategy::Exhaustive).unwrap();
        assert_eq!(e.value, 15);
        assert_eq!(q_count_matrix(&a1(), 7, 1).unwrap().value, 15);
        let r = r_count(&a1(), 7, 1).unwrap();
        assert_eq!(r.value, 15);
        assert_eq!(r.params.degrees, Some(vec![1, 1]));
    }

    #[test]
    fn zero_frequency_counts_everything() {
        let q = q_count_vector(&a1(), 9, &fv(&[9, -18]), 1).unwrap();
        assert_eq!(q.value, q.upper_bound());
    }

    #[test]
    fn inert_prime_uses_quadratic_factor() {
        let r = r_count(&a1(), 5, 1).unwrap();
        assert_eq!(r.params.degrees, Some(vec![2]));
        assert!(r.value >= r.diagonal_count());
        assert!(matches!(r_count(&a1(), 2, 1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn matrix_count_at_most_vector_count() {
        for n in [5u64, 9, 11, 13] {
            let m = q_count_matrix(&a1(), n, 1).unwrap().value;
            for f in FrequencyVector::ball(1, 2) {
                assert!(m <= q_count_vector(&a1(), n, &f, 1).unwrap().value);
            }
        }
        let m = q_count_matrix(&a2(), 7, 1).unwrap();
        assert!(m.value >= m.diagonal_count());
    }

    #[test]
    fn nu_two_agrees() {
        let c = q_count_vector(&a1(), 7, &fv(&[1, 2]), 2).unwrap();
        assert!(c.cross_checked);
        assert!(c.value <= c.upper_bound());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn counts_bounded_and_orbit_invariant(n in 2u64..40, x in -5i64..5, y in -5i64..5, j in 0u64..4) {
            let f = fv(&[x, y]);
            let c = q_count_vector(&a1(), n, &f, 1).unwrap();
            prop_assert!(c.value >= c.diagonal_count());
            prop_assert!(c.value <= c.upper_bound());
            let aj = a1().pow(j).to_i64().unwrap();
            let moved: Vec<i64> = (0..2).map(|col| x * aj[0][col] + y * aj[1][col]).collect();
            prop_assert_eq!(q_count_vector(&a1(), n, &fv(&moved), 1).unwrap().value, c.value);
        }
    }
}
