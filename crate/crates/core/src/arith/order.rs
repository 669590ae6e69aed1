//! Multiplicative orders of residues and of integer matrices.

use super::factor::{factorize, factorize_power_minus_one, merge_factors, Factorization};
use super::modular::gcd;
use crate::symplectic::fp_poly;
use crate::symplectic::{char_poly, ModMatrix, SymplecticMatrix};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest modulus for which matrix orders are cross-checked by direct powering.
pub const BRUTE_CHECK_LIMIT: u64 = 10_000;

/// Cap on the exponent of a prime power handled by lifting.
pub const LIFT_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMethod {
    Brute,
    Factored,
    Lifted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderBase {
    Residue(u64),
    /// Row-major entries reduced modulo the modulus.
    Matrix(Vec<Vec<u64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub base: OrderBase,
    pub modulus: u64,
    pub order: u128,
    pub method: OrderMethod,
}

impl OrderRecord {
    /// `base^order = 1` and `base^(order/q) != 1` for each prime `q | order`.
    pub fn verify(&self) -> bool {
        let fac = match u64::try_from(self.order).ok().and_then(|o| factorize(o).ok()) {
            Some(f) => f.factors,
            None => return false,
        };
        let is_one = |e: u128| match &self.base {
            OrderBase::Residue(a) => pow_mod_u128(*a, e, self.modulus) == 1 % self.modulus,
            OrderBase::Matrix(rows) => to_modmatrix(rows, self.modulus).pow_u128(e).is_identity(),
        };
        is_one(self.order) && fac.iter().all(|&(q, _)| !is_one(self.order / q as u128))
    }

    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(self.order).ok()
    }
}

fn to_modmatrix(rows: &[Vec<u64>], m: u64) -> ModMatrix {
    let d = rows.len();
    let mut out = ModMatrix::zero(d, m);
    for i in 0..d {
        for j in 0..d {
            out.set(i, j, rows[i][j]);
        }
    }
    out
}

fn modmatrix_rows(a: &ModMatrix) -> Vec<Vec<u64>> {
    (0..a.dim).map(|i| (0..a.dim).map(|j| a.get(i, j)).collect()).collect()
}

fn pow_mod_u128(a: u64, mut e: u128, m: u64) -> u64 {
    let mut base = a % m;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = super::modular::mul_mod(acc, base, m);
        }
        base = super::modular::mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Minimal `d | exponent` with `is_one(d)`, by descent through the prime
/// factors of a known annihilating exponent.
fn descend(exponent_factors: &[(u64, u32)], is_one: impl Fn(u128) -> bool) -> Result<u128> {
    let mut order: u128 = 1;
    for &(q, e) in exponent_factors {
        let qe = (q as u128).checked_pow(e).ok_or_else(overflow)?;
        order = order.checked_mul(qe).ok_or_else(overflow)?;
    }
    for &(q, e) in exponent_factors {
        for _ in 0..e {
            if order % q as u128 == 0 && is_one(order / q as u128) {
                order /= q as u128;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

fn overflow() -> Error {
    Error::BoundExceeded("order exceeds 128 bits".into())
}

/// Order of `a` in `(Z/mZ)^*`, descending from the Carmichael exponent.
pub fn mult_order(a: u64, m: u64) -> Result<OrderRecord> {
    if m < 2 {
        return Err(Error::InvalidInput("modulus must be at least 2".into()));
    }
    let a = a % m;
    if gcd(a, m) != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    let lambda = super::factor::carmichael(&factorize(m)?);
    let fac = factorize(lambda)?;
    let order = descend(&fac.factors, |e| pow_mod_u128(a, e, m) == 1)?;
    Ok(OrderRecord { base: OrderBase::Residue(a), modulus: m, order, method: OrderMethod::Factored })
}

/// Order of `a` modulo `m` by repeated multiplication.
pub fn mult_order_brute(a: u64, m: u64) -> Result<OrderRecord> {
    if gcd(a % m, m) != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    let mut x = a % m;
    let mut k = 1u128;
    while x != 1 % m {
        x = super::modular::mul_mod(x, a, m);
        k += 1;
    }
    Ok(OrderRecord { base: OrderBase::Residue(a % m), modulus: m, order: k, method: OrderMethod::Brute })
}

/// Degrees of the distinct irreducible factors of `f mod p`, from
/// `deg gcd(f, x^{p^d} - x) = sum_{e | d} e n_e`.
fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let n = fp_poly::degree(f);
    let x: Vec<u64> = vec![0, 1];
    let mut frob = x.clone();
    let mut counts = vec![0usize; n + 1];
    let mut out = Vec::new();
    for d in 1..=n {
        frob = fp_poly::powmod(&frob, p, f, p);
        let g = fp_poly::gcd(f, &fp_poly::sub(&frob, &x, p), p);
        let lower: usize = (1..d).filter(|e| d % e == 0).map(|e| e * counts[e]).sum();
        counts[d] = (fp_poly::degree(&g) - lower) / d;
        if counts[d] > 0 {
            out.push(d);
        }
    }
    out
}

/// An exponent annihilating `A mod p`: `lcm_d (p^d - 1)` over the degrees `d`
/// of the irreducible factors of `f_A mod p`, times `p^s >= 2g` when `f_A`
/// has repeated factors mod `p`.
fn exponent_factors(a: &SymplecticMatrix, p: u64) -> Result<Vec<(u64, u32)>> {
    let n = a.dim();
    let f = char_poly(a).to_mod(p);
    let mut lcm: Vec<(u64, u32)> = Vec::new();
    for k in factor_degrees(&f, p) {
        for (q, e) in factorize_power_minus_one(p, k as u32)? {
            match lcm.iter_mut().find(|(r, _)| *r == q) {
                Some(entry) => entry.1 = entry.1.max(e),
                None => lcm.push((q, e)),
            }
        }
    }
    if !fp_poly::is_squarefree(&f, p) {
        let mut s = 0u32;
        let mut ps = 1u64;
        while ps < n as u64 {
            ps *= p;
            s += 1;
        }
        lcm = merge_factors(&lcm, &[(p, s)]);
    }
    lcm.sort_unstable();
    Ok(lcm)
}

/// Order of `A` modulo a prime `p`.
fn matrix_order_prime(a: &SymplecticMatrix, p: u64) -> Result<u128> {
    let fac = exponent_factors(a, p)?;
    let am = a.to_mod(p);
    descend(&fac, |e| am.pow_u128(e).is_identity())
}

/// Order of `A` modulo `p^e` by lifting: each step multiplies by 1 or `p`.
fn matrix_order_prime_power(a: &SymplecticMatrix, p: u64, e: u32) -> Result<u128> {
    if e > LIFT_CAP {
        return Err(Error::BoundExceeded(format!(
            "lifting exponent {e} exceeds cap {LIFT_CAP} for p = {p}"
        )));
    }
    let mut order = matrix_order_prime(a, p)?;
    let mut pk = p;
    for _ in 1..e {
        pk *= p;
        if !a.to_mod(pk).pow_u128(order).is_identity() {
            order = order.checked_mul(p as u128).ok_or_else(overflow)?;
            debug_assert!(a.to_mod(pk).pow_u128(order).is_identity());
        }
    }
    Ok(order)
}

fn lcm_u128(a: u128, b: u128) -> Result<u128> {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    (a / x).checked_mul(b).ok_or_else(overflow)
}

/// Order of `A` modulo `N`: per prime power of `N`, combined by lcm.
/// For `N <= 10^4` the record is re-verified by direct powering.
pub fn matrix_order(a: &SymplecticMatrix, n: u64) -> Result<OrderRecord> {
    matrix_order_factored(a, &factorize(n)?)
}

pub fn matrix_order_factored(a: &SymplecticMatrix, fac: &Factorization) -> Result<OrderRecord> {
    let n = fac.n;
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let mut order: u128 = 1;
    let mut lifted = false;
    for &(p, e) in &fac.factors {
        lifted |= e > 1;
        order = lcm_u128(order, matrix_order_prime_power(a, p, e)?)?;
    }
    let record = OrderRecord {
        base: OrderBase::Matrix(modmatrix_rows(&a.to_mod(n.max(1)))),
        modulus: n,
        order,
        method: if lifted { OrderMethod::Lifted } else { OrderMethod::Factored },
    };
    if n >= 2 && n <= BRUTE_CHECK_LIMIT && !record.verify() {
        return Err(Error::Numerical(format!("matrix order {order} mod {n} failed verification")));
    }
    Ok(record)
}

/// Order of `A` modulo `N` by repeated multiplication, giving up after `cap` steps.
pub fn matrix_order_brute(a: &SymplecticMatrix, n: u64, cap: u128) -> Result<OrderRecord> {
    let m = a.to_mod(n);
    let mut acc = m.clone();
    let mut k: u128 = 1;
    while !acc.is_identity() {
        if k >= cap {
            return Err(Error::BoundExceeded(format!("brute order search passed {cap}")));
        }
        acc = acc.mul(&m);
        k += 1;
    }
    Ok(OrderRecord { base: OrderBase::Matrix(modmatrix_rows(&m)), modulus: n, order: k, method: OrderMethod::Brute })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::catalog::{a1, a2};
    use proptest::prelude::*;

    #[test]
    fn residue_examples() {
        assert_eq!(mult_order(1, 7).unwrap().order, 1);
        assert_eq!(mult_order(2, 7).unwrap().order, 3);
        assert_eq!(mult_order(4, 7).unwrap().order, 3);
        assert!(matches!(mult_order(3, 9), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(matrix_order(&a1(), 3).unwrap().order, 4);
        assert_eq!(matrix_order(&a1(), 7).unwrap().order, 3);
        assert_eq!(matrix_order(&a1(), 2).unwrap().order, 1);
        assert_eq!(matrix_order(&a1(), 1).unwrap().order, 1);
        let big = matrix_order(&a2(), 1_000_003).unwrap();
        assert!(big.order > 1);
    }

    #[test]
    fn matrix_orders_match_brute_force() {
        for n in 2..300u64 {
            let fast = matrix_order(&a1(), n).unwrap().order;
            let slow = matrix_order_brute(&a1(), n, 1 << 20).unwrap().order;
            assert_eq!(fast, slow, "N = {n}");
        }
        for n in [9u64, 25, 27, 45, 63, 81, 121, 125] {
            let fast = matrix_order(&a2(), n).unwrap().order;
            let slow = matrix_order_brute(&a2(), n, 1 << 24).unwrap().order;
            assert_eq!(fast, slow, "N = {n}");
        }
    }

    proptest! {
        #[test]
        fn residue_order_matches_brute(m in 2u64..5000, a in 1u64..5000) {
            prop_assume!(gcd(a % m, m) == 1);
            let r = mult_order(a, m).unwrap();
            prop_assert!(r.verify());
            prop_assert_eq!(r.order, mult_order_brute(a, m).unwrap().order);
        }

        #[test]
        fn crt_lcm(n1 in 2u64..80, n2 in 2u64..80) {
            prop_assume!(gcd(n1, n2) == 1);
            let o1 = matrix_order(&a1(), n1).unwrap().order;
            let o2 = matrix_order(&a1(), n2).unwrap().order;
            let o = matrix_order(&a1(), n1 * n2).unwrap().order;
            prop_assert_eq!(o, lcm_u128(o1, o2).unwrap());
        }
    }
}
