//! Modular arithmetic on `u64` moduli.

use crate::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn inv_mod(a: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(0);
    }
    let (g, x, _) = ext_gcd((a % m) as i128, m as i128);
    if g != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    Ok(x.rem_euclid(m as i128) as u64)
}

/// Bézout coefficients for a coprime split `N = N1 * N2`.
///
/// Returns `(r1, r2)` with `N2 * r2 + N1 * r1 = 1`, normalised so that
/// `0 < r2 < N1` and `r1 = (1 - N2 * r2) / N1`.
pub fn bezout_split(n1: u64, n2: u64) -> Result<(i64, i64)> {
    if n1 <= 1 || n2 <= 1 {
        return Err(Error::InvalidInput(format!(
            "bezout_split needs both moduli > 1, got ({n1}, {n2})"
        )));
    }
    if gcd(n1, n2) != 1 {
        return Err(Error::InvalidInput(format!(
            "bezout_split needs coprime moduli, gcd({n1}, {n2}) = {}",
            gcd(n1, n2)
        )));
    }
    let r2 = inv_mod(n2 % n1, n1)?;
    let num = 1i128 - n2 as i128 * r2 as i128;
    debug_assert_eq!(num % n1 as i128, 0);
    let r1 = num / n1 as i128;
    Ok((r1 as i64, r2 as i64))
}

/// Chinese remainder for coprime moduli: the residue mod `m1 * m2`.
pub fn crt_pair(a1: u64, m1: u64, a2: u64, m2: u64) -> u64 {
    let m = m1 as u128 * m2 as u128;
    let inv = inv_mod(m1 % m2, m2).expect("coprime moduli");
    let diff = (a2 as i128 - a1 as i128).rem_euclid(m2 as i128) as u128;
    let k = diff * inv as u128 % m2 as u128;
    ((a1 as u128 + m1 as u128 * k) % m) as u64
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout_split(3, 5).unwrap(), (-3, 2));
        assert_eq!(bezout_split(5, 3).unwrap(), (-1, 2));
        assert_eq!(bezout_split(7, 15).unwrap(), (-2, 1));
        assert!(bezout_split(6, 9).is_err());
        assert!(bezout_split(1, 9).is_err());
    }

    #[test]
    fn inverse_and_crt() {
        assert_eq!(inv_mod(3, 7).unwrap(), 5);
        assert!(matches!(inv_mod(4, 8), Err(Error::NotInvertible { .. })));
        let x = crt_pair(2, 3, 3, 5);
        assert_eq!(x % 3, 2);
        assert_eq!(x % 5, 3);
    }

    #[test]
    fn pow_mod_small() {
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(pow_mod(5, 0, 7), 1);
        assert_eq!(pow_mod(5, 3, 1), 0);
    }
}
