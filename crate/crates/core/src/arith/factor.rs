//! Integer factorization below 2^63: trial division followed by Pollard rho
//! with a deterministic Miller-Rabin primality test.

use super::modular::{gcd, mul_mod, pow_mod};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default upper bound accepted by [`factorize`].
pub const DEFAULT_FACTOR_BOUND: u64 = (1u64 << 63) - 1;

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization `n = prod p^e` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Product of the listed prime powers (checked).
    pub fn product(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// True iff every invariant of the type holds.
    pub fn is_consistent(&self) -> bool {
        self.product() == Some(self.n)
            && self.factors.windows(2).all(|w| w[0].0 < w[1].0)
            && self.factors.iter().all(|&(p, e)| e > 0 && is_prime(p))
    }
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho. `n` must be composite and odd.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Factor `n` with the default bound.
pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_bounded(n, DEFAULT_FACTOR_BOUND)
}

/// Factor `n`, refusing inputs above `bound`.
pub fn factorize_bounded(n: u64, bound: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    if n > bound {
        return Err(Error::BoundExceeded(format!(
            "factorize: {n} exceeds bound {bound}"
        )));
    }
    let mut rest = n;
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= rest {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest < p * p || is_prime(rest) {
            primes.push(rest);
        } else {
            split_into(rest, &mut primes);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

/// `Phi_k(x)` evaluated exactly, if it fits below the default factor bound.
pub fn cyclotomic_value(k: u64, x: u64) -> Option<u64> {
    use num_bigint::BigUint;
    let fk = factorize(k).ok()?;
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for d in fk.divisors() {
        let q = factorize(k / d).ok()?;
        if q.factors.iter().any(|&(_, e)| e > 1) {
            continue;
        }
        let term = BigUint::from(x).pow(d as u32) - BigUint::from(1u32);
        if q.factors.len() % 2 == 0 {
            num *= term;
        } else {
            den *= term;
        }
    }
    let v: BigUint = num / den;
    u64::try_from(v).ok().filter(|&v| v <= DEFAULT_FACTOR_BOUND)
}

/// Merge prime-power lists, adding exponents.
pub fn merge_factors(a: &[(u64, u32)], b: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = a.to_vec();
    for &(p, e) in b {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 += e,
            None => out.push((p, e)),
        }
    }
    out.sort_unstable();
    out
}

/// Factorization of `x^d - 1` as `prod_{k | d} Phi_k(x)`, so that values
/// beyond 64 bits can still be factored.
pub fn factorize_power_minus_one(x: u64, d: u32) -> Result<Vec<(u64, u32)>> {
    if x < 2 || d == 0 {
        return Err(Error::InvalidInput("x^d - 1 needs x >= 2 and d >= 1".into()));
    }
    let mut out = Vec::new();
    for k in factorize(d as u64)?.divisors() {
        let v = cyclotomic_value(k, x).ok_or_else(|| {
            Error::BoundExceeded(format!("Phi_{k}({x}) exceeds the factorization bound"))
        })?;
        out = merge_factors(&out, &factorize(v)?.factors);
    }
    Ok(out)
}

/// Euler's totient from a factorization.
pub fn totient(f: &Factorization) -> u64 {
    f.factors
        .iter()
        .fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Carmichael's function: the exponent of `(Z/mZ)^*`.
pub fn carmichael(f: &Factorization) -> u64 {
    f.factors.iter().fold(1u64, |acc, &(p, e)| {
        let lam = if p == 2 && e >= 3 {
            1u64 << (e - 2)
        } else {
            (p - 1) * p.pow(e - 1)
        };
        super::modular::lcm(acc, lam)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_minus_one_factorization() {
        let f = factorize_power_minus_one(7, 4).unwrap();
        assert_eq!(f, vec![(2, 5), (3, 1), (5, 2)]); // 2400
        let big = factorize_power_minus_one(1_000_003, 4).unwrap();
        let prod: u128 = big.iter().map(|&(p, e)| (p as u128).pow(e)).product();
        assert_eq!(prod, 1_000_003u128.pow(4) - 1);
        assert_eq!(cyclotomic_value(6, 10), Some(91));
    }

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_cases() {
        assert!(factorize(1).unwrap().factors.is_empty());
        assert_eq!(factorize(60).unwrap().factors, vec![(2, 2), (3, 1), (5, 1)]);
        let m = (1u64 << 31) - 1;
        assert!(trial_is_prime(m));
        assert_eq!(factorize(m).unwrap().factors, vec![(m, 1)]);
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), trial_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn large_semiprimes() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors, vec![(q, 1), (p, 1)]);
        let f = factorize(DEFAULT_FACTOR_BOUND).unwrap();
        assert!(f.is_consistent());
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            factorize(u64::MAX),
            Err(Error::BoundExceeded(_))
        ));
        assert!(matches!(factorize_bounded(100, 50), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn divisors_and_group_exponents() {
        let f = factorize(12).unwrap();
        assert_eq!(f.divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(totient(&factorize(36).unwrap()), 12);
        assert_eq!(carmichael(&factorize(8).unwrap()), 2);
        assert_eq!(carmichael(&factorize(15).unwrap()), 4);
    }
}
