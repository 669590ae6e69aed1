//! Dense univariate polynomials over `Z` (coefficients low to high).

use super::linalg::det_int;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn x_minus(a: i64) -> Self {
        Self::from_i64(&[-a, 1])
    }

    /// `x^d - 1`.
    pub fn x_pow_minus_one(d: usize) -> Self {
        let mut c = vec![BigInt::zero(); d + 1];
        c[0] = -BigInt::one();
        c[d] = BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        (0..k).fold(IntPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return Self::from_i64(&[0]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `f(c x)`.
    pub fn scale_argument(&self, c: &BigInt) -> IntPoly {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + c.to_f64().unwrap_or(f64::NAN)
        })
    }

    /// Reduction of the coefficients modulo `p`, as a dense `F_p` polynomial.
    pub fn to_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut v: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect();
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        v
    }

    /// Exact division; `None` if `divisor` does not divide `self` in `Z[x]`.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.divrem_rational(divisor);
        if !r.iter().all(|c| c.is_zero()) {
            return None;
        }
        if !q.iter().all(|c| c.is_integer()) {
            return None;
        }
        Some(Self::new(q.iter().map(|c| c.to_integer()).collect()))
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.div_exact(self).is_some()
    }

    fn divrem_rational(&self, d: &IntPoly) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let dd = d.degree();
        if self.degree() < dd {
            return (vec![BigRational::zero()], r);
        }
        let lc = BigRational::from_integer(d.leading().clone());
        let mut q = vec![BigRational::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let sub = &c * BigRational::from_integer(dc.clone());
                    r[k + j] -= sub;
                }
            }
            q[k] = c;
        }
        r.truncate(dd.max(1));
        (q, r)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let sign = if self.leading().is_negative() { -BigInt::one() } else { BigInt::one() };
        Self::new(self.coeffs.iter().map(|a| a / &c * &sign).collect())
    }

    /// Greatest common divisor over `Q`, returned primitive.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a: Vec<BigRational> = to_rat(self);
        let mut b: Vec<BigRational> = to_rat(other);
        trim_rat(&mut a);
        trim_rat(&mut b);
        while !(b.len() == 1 && b[0].is_zero()) {
            let r = rat_rem(&a, &b);
            a = b;
            b = r;
        }
        let den = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::new(a.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
            .primitive_part()
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        let m = self.degree();
        let n = other.degree();
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut s = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                s[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                s[n + i][i + j] = c.clone();
            }
        }
        det_int(&s)
    }

    /// `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::zero();
        }
        if n == 1 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative()) / self.leading();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Coefficient palindrome `c_k = c_{n-k}`.
    pub fn is_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        (0..n).all(|k| self.coeffs[k] == self.coeffs[n - 1 - k])
    }

    /// Complex roots by Durand-Kerner iteration with Newton polishing.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return vec![];
        }
        let lc = self.leading().to_f64().unwrap();
        let monic: Vec<f64> = self.coeffs.iter().map(|c| c.to_f64().unwrap() / lc).collect();
        let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &c| a * z + c);
        let bound = 1.0 + monic[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
        let seed = Complex64::new(0.4, 0.9);
        let mut roots: Vec<Complex64> = (0..n)
            .map(|k| seed.powu(k as u32) * (bound / 2.0).max(1.0) / seed.norm().powi(k as i32).max(1e-12))
            .collect();
        for _ in 0..2000 {
            let mut delta = 0.0f64;
            for i in 0..n {
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        den *= roots[i] - roots[j];
                    }
                }
                if den.norm() == 0.0 {
                    den = Complex64::new(1e-12, 0.0);
                }
                let step = eval(roots[i]) / den;
                roots[i] -= step;
                delta = delta.max(step.norm() / roots[i].norm().max(1.0));
            }
            if delta < 1e-15 {
                break;
            }
        }
        let d: Vec<f64> = (1..=n).map(|i| monic[i] * i as f64).collect();
        let deval = |z: Complex64| d.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &c| a * z + c);
        for r in roots.iter_mut() {
            for _ in 0..4 {
                let dv = deval(*r);
                if dv.norm() > 0.0 {
                    *r -= eval(*r) / dv;
                }
            }
        }
        roots
    }

    /// Square-free decomposition (Yun): pairs `(factor, multiplicity)`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let f = self.primitive_part();
        let mut out = Vec::new();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        if a.degree() == 0 {
            return vec![(f, 1)];
        }
        let mut b = f.div_exact_rational(&a);
        let mut c = fp.div_exact_rational(&a);
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        loop {
            if b.degree() == 0 {
                break;
            }
            a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), k));
            }
            b = b.div_exact_rational(&a);
            c = d.div_exact_rational(&a);
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    // Division over Q followed by clearing denominators and taking the primitive part.
    fn div_exact_rational(&self, d: &IntPoly) -> IntPoly {
        let (q, _) = self.divrem_rational(d);
        let den = q.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::new(q.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
    }

    /// Factorization over `Q` of a monic integer polynomial into monic
    /// irreducible factors with multiplicities.
    ///
    /// Square-free parts are split by combining numerically computed roots
    /// into candidate factors; every candidate is confirmed by exact
    /// division, so a returned factorization is always exact. Irreducibility
    /// of a returned factor relies on the roots being accurate enough to
    /// round candidate coefficients, which is guarded by a magnitude check.
    pub fn factor_over_q(&self) -> Result<Vec<(IntPoly, u32)>> {
        if !self.is_monic() {
            return Err(Error::InvalidInput("factor_over_q expects a monic polynomial".into()));
        }
        let mut out: Vec<(IntPoly, u32)> = Vec::new();
        for (part, mult) in self.squarefree_decomposition() {
            for f in factor_squarefree(&part)? {
                out.push((f, mult));
            }
        }
        out.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
        });
        Ok(out)
    }
}

fn to_rat(p: &IntPoly) -> Vec<BigRational> {
    p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim_rat(v: &mut Vec<BigRational>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / b.last().unwrap();
        for (j, bc) in b.iter().enumerate() {
            let sub = &c * bc;
            r[k + j] -= sub;
        }
        r.pop();
        trim_rat(&mut r);
        if r.len() <= db {
            break;
        }
    }
    if r.is_empty() {
        r.push(BigRational::zero());
    }
    trim_rat(&mut r);
    r
}

const ROUNDING_LIMIT: f64 = 4.5e15;

fn candidate_from_roots(roots: &[Complex64]) -> Option<IntPoly> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * r;
        }
        c = next;
    }
    let mut ints = Vec::with_capacity(c.len());
    for z in c {
        let scale = z.re.abs().max(1.0);
        if z.re.abs() > ROUNDING_LIMIT {
            return None;
        }
        if z.im.abs() > 1e-6 * scale || (z.re - z.re.round()).abs() > 1e-6 * scale {
            return None;
        }
        ints.push(BigInt::from(z.re.round() as i64));
    }
    Some(IntPoly::new(ints))
}

fn factor_squarefree(f: &IntPoly) -> Result<Vec<IntPoly>> {
    if f.degree() <= 1 {
        return Ok(vec![f.clone()]);
    }
    let bound = f.coeffs.iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    if bound > ROUNDING_LIMIT / 1e3 {
        return Err(Error::Numerical(
            "coefficients too large for root-guided factorization".into(),
        ));
    }
    let roots = f.complex_roots();
    let n = roots.len();
    for size in 1..=n / 2 {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let subset: Vec<Complex64> = idx.iter().map(|&i| roots[i]).collect();
            if let Some(cand) = candidate_from_roots(&subset) {
                if let Some(q) = f.div_exact(&cand) {
                    let mut out = factor_squarefree(&cand)?;
                    out.extend(factor_squarefree(&q)?);
                    return Ok(out);
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Ok(vec![f.clone()])
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Euler's totient for small arguments.
pub fn euler_phi(m: u64) -> u64 {
    let f = crate::arith::factor::factorize(m).expect("small argument");
    crate::arith::factor::totient(&f)
}

/// The `m`-th cyclotomic polynomial, via `prod_{d | m} (x^d - 1)^{mu(m/d)}`.
pub fn cyclotomic(m: u64) -> IntPoly {
    let f = crate::arith::factor::factorize(m).expect("small argument");
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for d in f.divisors() {
        let q = crate::arith::factor::factorize(m / d).unwrap();
        if q.factors.iter().any(|&(_, e)| e > 1) {
            continue;
        }
        let term = IntPoly::x_pow_minus_one(d as usize);
        if q.factors.len() % 2 == 0 {
            num = num.mul(&term);
        } else {
            den = den.mul(&term);
        }
    }
    num.div_exact(&den).expect("cyclotomic division is exact")
}

/// All `m` with `phi(m) <= bound`, increasing.
pub fn cyclotomic_indices(bound: u64) -> Vec<u64> {
    let limit = 2 * bound * bound + 6;
    (1..=limit).filter(|&m| euler_phi(m) <= bound).collect()
}

/// Lagrange interpolation through integer points; `None` if the result is
/// not an integer polynomial.
pub fn interpolate_integer(xs: &[BigInt], ys: &[BigInt]) -> Option<IntPoly> {
    let n = xs.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * BigRational::from_integer(xs[j].clone());
            }
            basis = next;
            denom *= BigRational::from_integer(&xs[i] - &xs[j]);
        }
        let scale = BigRational::from_integer(ys[i].clone()) / denom;
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += b * &scale;
        }
    }
    if !coeffs.iter().all(|c| c.is_integer()) {
        return None;
    }
    Some(IntPoly::new(coeffs.iter().map(|c| c.to_integer()).collect()))
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(IntPoly::from_i64(&[1, -6, 1]).discriminant(), BigInt::from(32));
        assert_eq!(IntPoly::from_i64(&[1, -18, 1]).discriminant(), BigInt::from(320));
        assert_eq!(IntPoly::from_i64(&[1, -2, 1]).discriminant(), BigInt::zero());
        // x^3 - 2: -27 * 4 = -108
        assert_eq!(IntPoly::from_i64(&[-2, 0, 0, 1]).discriminant(), BigInt::from(-108));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(5), IntPoly::from_i64(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_indices(2), vec![1, 2, 3, 4, 6]);
    }

    #[test]
    fn factorization_over_q() {
        let f = IntPoly::from_i64(&[1, -6, 1]).mul(&IntPoly::from_i64(&[1, -18, 1]));
        let fac = f.factor_over_q().unwrap();
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].0, IntPoly::from_i64(&[1, -18, 1]));
        assert_eq!(fac[1].0, IntPoly::from_i64(&[1, -6, 1]));

        let sq = IntPoly::from_i64(&[1, -6, 1]).pow(2);
        let fac = sq.factor_over_q().unwrap();
        assert_eq!(fac, vec![(IntPoly::from_i64(&[1, -6, 1]), 2)]);

        let id = IntPoly::from_i64(&[1, -2, 1]);
        assert_eq!(id.factor_over_q().unwrap(), vec![(IntPoly::from_i64(&[-1, 1]), 2)]);

        let x4m1 = IntPoly::x_pow_minus_one(4);
        let fac = x4m1.factor_over_q().unwrap();
        let degs: Vec<usize> = fac.iter().map(|(p, _)| p.degree()).collect();
        assert_eq!(degs, vec![1, 1, 2]);

        let irr = IntPoly::from_i64(&[1, 1, 1, 1, 1]);
        assert_eq!(irr.factor_over_q().unwrap().len(), 1);
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x - a, x - b) = a - b up to sign convention: (b - a)^... check directly
        let f = IntPoly::from_i64(&[-2, 1]);
        let g = IntPoly::from_i64(&[-5, 1]);
        assert_eq!(f.resultant(&g), BigInt::from(-3));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = IntPoly::from_i64(&[3, 0, -2, 1]);
        let xs: Vec<BigInt> = (1..=4).map(BigInt::from).collect();
        let ys: Vec<BigInt> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(interpolate_integer(&xs, &ys).unwrap(), f);
    }
}
