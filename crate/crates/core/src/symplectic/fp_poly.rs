//! Polynomials over `F_p` (coefficients low to high, `p` an odd prime).

use crate::arith::modular::{inv_mod, mul_mod};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type FpPoly = Vec<u64>;

pub fn trim(mut a: FpPoly) -> FpPoly {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

pub fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

pub fn degree(a: &[u64]) -> usize {
    trim(a.to_vec()).len() - 1
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0) % p) % p)
            .collect(),
    )
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    assert!(!is_zero(&b), "division by zero polynomial");
    if r.len() - 1 < db {
        return (vec![0], r);
    }
    let inv = inv_mod(*b.last().unwrap(), p).expect("leading coefficient invertible");
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mul_mod(r[k + db], inv, p);
        q[k] = c;
        if c != 0 {
            for (j, &bc) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod(c, bc, p)) % p;
            }
        }
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn make_monic(a: &[u64], p: u64) -> FpPoly {
    let a = trim(a.to_vec());
    let lc = *a.last().unwrap();
    if lc == 0 {
        return a;
    }
    let inv = inv_mod(lc, p).unwrap();
    a.iter().map(|&c| mul_mod(c, inv, p)).collect()
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !is_zero(&b) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(&a, p)
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> FpPoly {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    rem(&result, m, p)
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

pub fn derivative(a: &[u64], p: u64) -> FpPoly {
    if a.len() <= 1 {
        return vec![0];
    }
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect(),
    )
}

/// Square-free over `F_p` (for degree below `p`): `gcd(f, f') = 1`.
pub fn is_squarefree(f: &[u64], p: u64) -> bool {
    degree(&gcd(f, &derivative(f, p), p)) == 0
}

/// Distinct-degree factorization of a monic square-free `f`:
/// pairs `(d, product of all degree-d irreducible factors)`.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(usize, FpPoly)> {
    let mut f = make_monic(f, p);
    let mut out = Vec::new();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while degree(&f) >= 2 * (d + 1) {
        d += 1;
        h = powmod(&h, p, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        if degree(&g) > 0 {
            out.push((d, g.clone()));
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
    }
    if degree(&f) > 0 {
        out.push((degree(&f), f));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of irreducibles of degree `d`.
pub fn equal_degree(f: &[u64], d: usize, p: u64, seed: u64) -> Vec<FpPoly> {
    let f = make_monic(f, p);
    let n = degree(&f);
    if n == 0 {
        return vec![];
    }
    if n <= d {
        return vec![f];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a: FpPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if degree(&a) == 0 {
            continue;
        }
        let g = gcd(&a, &f, p);
        if degree(&g) > 0 && degree(&g) < n {
            return split_pair(&f, &g, d, p, seed);
        }
        // a^{(p^d - 1)/2} = (a^{1 + p + ... + p^{d-1}})^{(p-1)/2}
        let mut frob = a.clone();
        let mut acc = a.clone();
        for _ in 1..d {
            frob = powmod(&frob, p, &f, p);
            acc = mulmod(&acc, &frob, &f, p);
        }
        let b = powmod(&acc, (p - 1) / 2, &f, p);
        let g = gcd(&sub(&b, &[1], p), &f, p);
        if degree(&g) > 0 && degree(&g) < n {
            return split_pair(&f, &g, d, p, seed);
        }
    }
}

fn split_pair(f: &[u64], g: &[u64], d: usize, p: u64, seed: u64) -> Vec<FpPoly> {
    let q = divrem(f, g, p).0;
    let mut out = equal_degree(g, d, p, seed.wrapping_mul(6364136223846793005).wrapping_add(1));
    out.extend(equal_degree(&q, d, p, seed.wrapping_mul(6364136223846793005).wrapping_add(3)));
    out
}

/// Monic irreducible factors of a square-free `f`, sorted by degree then coefficients.
pub fn factor_squarefree(f: &[u64], p: u64) -> Vec<FpPoly> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, 0x5eed ^ d as u64));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Roots of `f` in `F_p`, sorted, with multiplicity one each.
pub fn roots(f: &[u64], p: u64) -> Vec<u64> {
    let f = make_monic(f, p);
    if degree(&f) == 0 {
        return vec![];
    }
    if p <= 5000 {
        return (0..p).filter(|&x| eval(&f, x, p) == 0).collect();
    }
    let x = vec![0u64, 1];
    let xp = powmod(&x, p, &f, p);
    let lin = gcd(&f, &sub(&xp, &x, p), p);
    if degree(&lin) == 0 {
        return vec![];
    }
    let mut out: Vec<u64> = equal_degree(&lin, 1, p, 17)
        .into_iter()
        .filter(|g| degree(g) == 1)
        .map(|g| (p - g[0]) % p)
        .collect();
    out.sort_unstable();
    out
}

/// Multiplicative order of `x` in `F_p[x]/(h)` for irreducible `h`.
pub fn element_order_in_field(h: &[u64], p: u64) -> crate::Result<u128> {
    let d = degree(h) as u32;
    let fac = crate::arith::factor::factorize_power_minus_one(p, d)?;
    let mut o = (p as u128).pow(d) - 1;
    let x = vec![0u64, 1];
    for (q, _) in fac {
        let q = q as u128;
        while o % q == 0 && is_one(&powmod_u128(&x, o / q, h, p)) {
            o /= q;
        }
    }
    Ok(o)
}

fn is_one(a: &[u64]) -> bool {
    trim(a.to_vec()) == vec![1]
}

pub fn powmod_u128(base: &[u64], mut e: u128, m: &[u64], p: u64) -> FpPoly {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    rem(&result, m, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        let n = degree(f);
        if n <= 1 {
            return true;
        }
        // no monic factor of degree 1..=n/2
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut g = vec![0u64; d + 1];
                let mut c = code;
                for slot in g.iter_mut().take(d) {
                    *slot = c % p;
                    c /= p;
                }
                g[d] = 1;
                if is_zero(&rem(f, &g, p)) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn factors_multiply_back_and_are_irreducible() {
        let p = 7;
        // (x^2 + 1)(x - 2)(x - 3)(x^2 + x + 3)
        let f = mul(&mul(&mul(&[1, 0, 1], &[5, 1], p), &[4, 1], p), &[3, 1, 1], p);
        let fac = factor_squarefree(&f, p);
        let prod = fac.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, make_monic(&f, p));
        for g in &fac {
            assert!(brute_irreducible(g, p));
        }
        assert_eq!(fac.iter().map(|g| degree(g)).collect::<Vec<_>>(), vec![1, 1, 2, 2]);
    }

    #[test]
    fn roots_large_prime() {
        let p = 1_000_003;
        let f = mul(&[p - 5, 1], &[p - 123_456, 1], p);
        let f = mul(&f, &[1, 0, 1], p); // x^2 + 1 irreducible since p = 3 mod 4
        assert_eq!(roots(&f, p), vec![5, 123_456]);
        assert!(roots(&[1, 0, 1], p).is_empty());
        assert!(roots(&[1, 0, 1], 5003).is_empty());
    }

    #[test]
    fn order_of_generator() {
        // x^2 - 6x + 1 mod 7: roots 3 +- sqrt(8) = 3 +- 1 -> 2 and 4, orders 3 and 3
        let p = 7;
        let f = vec![1, 1, 1]; // x^2 + x + 1 = Phi_3 mod 7 splits; x has order 3 in each factor
        for h in factor_squarefree(&f, p) {
            assert_eq!(element_order_in_field(&h, p).unwrap(), 3);
        }
    }
}
