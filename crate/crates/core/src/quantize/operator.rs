//! Dense operators on `H_N` backed by `faer` matrices.

use num_complex::Complex64;
use faer::Mat;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

pub type CMat = Mat<Complex64>;

/// What a dense operator represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Translation,
    Observable,
    Propagator,
    Projector,
    Average,
    Other,
}

#[derive(Clone, Debug)]
pub struct DenseOperator {
    pub n: u64,
    pub g: usize,
    pub kind: OperatorKind,
    pub matrix: CMat,
}

impl DenseOperator {
    pub fn new(n: u64, g: usize, kind: OperatorKind, matrix: CMat) -> Self {
        DenseOperator { n, g, kind, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn identity(n: u64, g: usize) -> Self {
        let d = super::state::dimension(n, g);
        DenseOperator::new(n, g, OperatorKind::Other, Mat::identity(d, d))
    }

    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        DenseOperator::new(self.n, self.g, OperatorKind::Other, &self.matrix * &other.matrix)
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator::new(self.n, self.g, self.kind, self.matrix.adjoint().to_owned())
    }

    pub fn frobenius(&self) -> f64 {
        self.matrix.norm_l2()
    }

    /// `|U* U - I|_F / |I|_F`.
    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.matrix)
    }

    /// `|H - H*|_F / |H|_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        let h = &self.matrix;
        let diff = h - h.adjoint();
        diff.norm_l2() / h.norm_l2().max(f64::MIN_POSITIVE)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        matvec(&self.matrix, v)
    }
}

pub fn unitarity_residual(u: &CMat) -> f64 {
    let d = u.nrows();
    let prod = u.adjoint() * u;
    let diff = prod - CMat::identity(d, d);
    diff.norm_l2() / (d as f64).sqrt()
}

pub fn matvec(m: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    let (r, c) = (m.nrows(), m.ncols());
    assert_eq!(c, v.len());
    let mut out = vec![Complex64::new(0.0, 0.0); r];
    for (j, &x) in v.iter().enumerate() {
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        let col = m.col_as_slice(j);
        for i in 0..r {
            out[i] += col[i] * x;
        }
    }
    out
}

/// Row vector times matrix: `v^t M`.
pub fn vecmat(v: &[Complex64], m: &CMat) -> Vec<Complex64> {
    (0..m.ncols())
        .map(|j| m.col_as_slice(j).iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// `|A - B|_F`.
pub fn diff_norm(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm_l2()
}

/// Kronecker product `A (x) B`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    CMat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Largest singular value of `m` by power iteration on `m* m`, to the given
/// relative tolerance.
pub fn spectral_norm(m: &CMat, rel_tol: f64) -> f64 {
    let (r, c) = (m.nrows(), m.ncols());
    if r == 0 || c == 0 {
        return 0.0;
    }
    let fro = m.norm_l2();
    if fro == 0.0 {
        return 0.0;
    }
    if c == 1 || r == 1 {
        return fro;
    }
    // Work with the smaller Gram matrix.
    let gram = if c <= r { m.adjoint() * m } else { m * m.adjoint() };
    let k = gram.nrows();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<Complex64> = (0..k)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nv);
    for _ in 0..5_000 {
        let w = matvec(&gram, &v);
        let rho: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        let nw = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if nw == 0.0 {
            return 0.0;
        }
        let resid = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b * rho).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if resid <= rel_tol * rho {
            return rho.max(0.0).sqrt();
        }
        v = w.into_iter().map(|x| x / nw).collect();
    }
    gram.self_adjoint_eigenvalues(faer::Side::Lower)
        .map(|s| s.into_iter().fold(0.0, f64::max).max(0.0).sqrt())
        .unwrap_or(f64::NAN)
}

/// Largest singular value through `faer`'s SVD.
pub fn spectral_norm_svd(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values()
        .map(|s| s.into_iter().fold(0.0, f64::max))
        .unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    fn random(r: usize, c: usize, rng: &mut ChaCha8Rng) -> CMat {
        CMat::from_fn(r, c, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
    }

    #[test]
    fn power_iteration_matches_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (r, c) in [(3, 3), (5, 2), (2, 7), (12, 12)] {
            let m = random(r, c, &mut rng);
            let a = spectral_norm(&m, 1e-8);
            let b = spectral_norm_svd(&m);
            assert!((a - b).abs() <= 1e-8 * b, "{a} vs {b}");
        }
    }

    #[test]
    fn tensor_norm_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let s1 = random(3, 3, &mut rng);
            let s2 = random(3, 3, &mut rng);
            let lhs = spectral_norm(&kron(&s1, &s2), 1e-10);
            let rhs = spectral_norm(&s1, 1e-10) * spectral_norm(&s2, 1e-10);
            assert!((lhs - rhs).abs() <= 1e-8 * rhs);
        }
    }
}
