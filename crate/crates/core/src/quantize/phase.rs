//! Exact phases `e_M(k) = exp(2 pi i k / M)` addressed by integer exponents.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Table of the `M`-th roots of unity.
#[derive(Clone, Debug)]
pub struct PhaseTable {
    modulus: u64,
    table: Vec<Complex64>,
}

impl PhaseTable {
    pub fn new(modulus: u64) -> Self {
        let table = (0..modulus).map(|k| root_of_unity(k, modulus)).collect();
        PhaseTable { modulus, table }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, k: u64) -> Complex64 {
        self.table[(k % self.modulus) as usize]
    }
}

/// `exp(2 pi i k / m)`, exact at the eighth roots of unity.
pub fn root_of_unity(k: u64, m: u64) -> Complex64 {
    let k = k % m;
    if (8 * k) % m == 0 {
        let e = (8 * k / m) as usize;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        return [
            Complex64::new(1.0, 0.0),
            Complex64::new(h, h),
            Complex64::new(0.0, 1.0),
            Complex64::new(-h, h),
            Complex64::new(-1.0, 0.0),
            Complex64::new(-h, -h),
            Complex64::new(0.0, -1.0),
            Complex64::new(h, -h),
        ][e];
    }
    let theta = 2.0 * PI * k as f64 / m as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// `e(x) = exp(2 pi i x)` for real `x`.
pub fn e(x: f64) -> Complex64 {
    let t = 2.0 * PI * x;
    Complex64::new(t.cos(), t.sin())
}
