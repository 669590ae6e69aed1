//! Root-of-unity eigenspaces of a propagator and matrix elements between them.

use super::observable::ObservableSpec;
use super::operator::{spectral_norm, CMat};
use super::phase::PhaseTable;
use super::propagator::{solve_propagator, Propagator};
use super::translation::Translation;
use crate::arith::modular::reduce_i64;
use crate::symplectic::SymplecticMatrix;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest dimension handled by the projector route.
pub const PROJECTOR_ROUTE_MAX_DIM: usize = 64;
/// Largest quantum period handled by the projector route.
pub const PROJECTOR_ROUTE_MAX_PERIOD: u64 = 512;
/// Relative tolerance for power iteration in matrix-element suprema.
pub const SUP_TOL: f64 = 1e-8;

/// `E_m = ker(U - theta_m)` with an orthonormal basis stored as columns
/// (unit vectors in the plain Euclidean norm).
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub m: u64,
    pub theta: Complex64,
    pub basis: CMat,
}

impl Eigenspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.basis.col_as_slice(k).to_vec()
    }
}

/// `theta_m = zeta^{1/tau} e(m/tau)` with the principal root.
pub fn eigenvalue_label(zeta: Complex64, tau: u64, m: u64) -> Complex64 {
    Complex64::from_polar(1.0, (zeta.arg() + 2.0 * PI * m as f64) / tau as f64)
}

/// Fill the `eigen` field.
pub fn eigen_decompose(mut p: Propagator) -> Result<Propagator> {
    p.eigen = eigenspaces(&p)?;
    Ok(p)
}

/// `U(A)` for `A` together with its eigenspaces.
pub fn solve_and_decompose(a: &SymplecticMatrix, n: u64, r: i64) -> Result<Propagator> {
    eigen_decompose(solve_propagator(a, n, r)?)
}

/// Eigenspaces of `U`, in increasing `m`, empty ones dropped.
pub fn eigenspaces(p: &Propagator) -> Result<Vec<Eigenspace>> {
    let spaces = if p.dim() <= PROJECTOR_ROUTE_MAX_DIM && p.quantum_period <= PROJECTOR_ROUTE_MAX_PERIOD {
        by_projectors(p.matrix(), p.quantum_period, p.phase)?
    } else {
        by_hermitian(p.matrix(), p.quantum_period, p.phase)?
    };
    let total: usize = spaces.iter().map(Eigenspace::dim).sum();
    if total != p.dim() {
        return Err(Error::Numerical(format!(
            "eigenspaces have total dimension {total}, expected {}",
            p.dim()
        )));
    }
    let (v, ranges) = eigenbasis(&spaces);
    let uv = p.matrix() * &v;
    for (s, range) in spaces.iter().zip(ranges) {
        for k in range {
            let r = uv
                .col_as_slice(k)
                .iter()
                .zip(v.col_as_slice(k))
                .map(|(a, b)| (a - b * s.theta).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if r > 1e-8 {
                return Err(Error::Numerical(format!("eigenvector residual {r:e} on E_{}", s.m)));
            }
        }
    }
    Ok(spaces)
}

/// Residuals of the spectral decomposition, all in Frobenius norm.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectralCheck {
    /// `|sum P_m - I|`.
    pub completeness: f64,
    /// `max |P_m^2 - P_m|`.
    pub idempotence: f64,
    /// `max |P_m P_m'|` over `m != m'`.
    pub orthogonality: f64,
    /// `max |U v - theta v|` over basis vectors.
    pub eigenvector: f64,
    /// `max |theta^tau - zeta|`.
    pub label: f64,
}

pub fn spectral_check(p: &Propagator) -> Result<SpectralCheck> {
    if p.eigen.is_empty() {
        return Err(Error::Precondition("propagator has no eigen decomposition".into()));
    }
    let d = p.dim();
    let projs = spectral_projectors(&p.eigen);
    let mut sum = CMat::zeros(d, d);
    let (mut idempotence, mut orthogonality) = (0.0f64, 0.0f64);
    for (i, pi) in projs.iter().enumerate() {
        sum += pi;
        idempotence = idempotence.max((pi * pi - pi).norm_l2());
        for pj in projs.iter().skip(i + 1) {
            orthogonality = orthogonality.max((pi * pj).norm_l2());
        }
    }
    let completeness = (sum - CMat::identity(d, d)).norm_l2();
    let eigenvector = p.eigen.iter().map(|s| eigen_residual(p.matrix(), s)).fold(0.0, f64::max);
    let label = p
        .eigen
        .iter()
        .map(|s| (s.theta.powu(p.quantum_period as u32) - p.phase).norm())
        .fold(0.0, f64::max);
    Ok(SpectralCheck { completeness, idempotence, orthogonality, eigenvector, label })
}

/// Largest `|U v - theta v|` over the basis of `s`.
pub fn eigen_residual(u: &CMat, s: &Eigenspace) -> f64 {
    let r = u * &s.basis - &s.basis * faer::Scale(s.theta);
    (0..s.dim())
        .map(|k| r.col_as_slice(k).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// `P_m = tau^{-1} sum_j theta_m^{-j} U^j` for every `m`, including empty ones.
pub fn spectral_projectors_from_powers(u: &CMat, tau: u64, zeta: Complex64) -> Vec<CMat> {
    let d = u.nrows();
    let mut powers = Vec::with_capacity(tau as usize);
    let mut cur = CMat::identity(d, d);
    for _ in 0..tau {
        powers.push(cur.clone());
        cur = &cur * u;
    }
    (0..tau)
        .map(|m| {
            let theta = eigenvalue_label(zeta, tau, m);
            let mut p = CMat::zeros(d, d);
            let mut w = Complex64::new(1.0 / tau as f64, 0.0);
            for pj in &powers {
                p += pj * faer::Scale(w);
                w /= theta;
            }
            p
        })
        .collect()
}

fn by_projectors(u: &CMat, tau: u64, zeta: Complex64) -> Result<Vec<Eigenspace>> {
    let d = u.nrows();
    let projs = spectral_projectors_from_powers(u, tau, zeta);
    let mut sum = CMat::zeros(d, d);
    for p in &projs {
        sum += p;
    }
    let complete = (sum - CMat::identity(d, d)).norm_l2();
    if complete > 1e-8 {
        return Err(Error::Numerical(format!("projectors sum to I only within {complete:e}")));
    }
    let mut out = Vec::new();
    for (m, p) in projs.into_iter().enumerate() {
        let tr: f64 = (0..d).map(|i| p[(i, i)].re).sum();
        let rank = tr.round() as usize;
        if rank == 0 {
            continue;
        }
        out.push(Eigenspace {
            m: m as u64,
            theta: eigenvalue_label(zeta, tau, m as u64),
            basis: pivoted_orthonormal_columns(&p, rank),
        });
    }
    Ok(out)
}

/// Orthonormal basis of the span of the columns of `p`, picking at each step
/// the residual column of largest norm.
pub fn pivoted_orthonormal_columns(p: &CMat, rank: usize) -> CMat {
    let d = p.nrows();
    let mut cols: Vec<Vec<Complex64>> = (0..p.ncols()).map(|j| p.col_as_slice(j).to_vec()).collect();
    let mut basis = CMat::zeros(d, rank);
    for k in 0..rank {
        let (best, _) = cols
            .iter()
            .enumerate()
            .map(|(j, c)| (j, c.iter().map(|x| x.norm_sqr()).sum::<f64>()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let v = cols[best].clone();
        let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let q: Vec<Complex64> = v.iter().map(|x| x / nv).collect();
        for c in cols.iter_mut() {
            let dot: Complex64 = q.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
            c.iter_mut().zip(&q).for_each(|(x, y)| *x -= dot * y);
        }
        for i in 0..d {
            basis[(i, k)] = q[i];
        }
    }
    basis
}

/// Diagonalize the Hermitian part of a rotated copy of `U`; the rotation makes
/// distinct labels `m` land on distinct real eigenvalues.
fn by_hermitian(u: &CMat, tau: u64, zeta: Complex64) -> Result<Vec<Eigenspace>> {
    let d = u.nrows();
    let theta0 = eigenvalue_label(zeta, tau, 0);
    let alpha = theta0.arg() + PI / (2.0 * tau as f64);
    let rot = Complex64::from_polar(0.5, -alpha);
    let h = CMat::from_fn(d, d, |i, j| rot * u[(i, j)] + (rot * u[(j, i)]).conj());
    let eig = h
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver failed: {e:?}")))?;
    let v = eig.U().to_owned();
    let uv = u * &v;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); tau as usize];
    for k in 0..d {
        let lam: Complex64 = v.col_as_slice(k).iter().zip(uv.col_as_slice(k)).map(|(a, b)| a.conj() * b).sum();
        let turns = (lam.arg() - theta0.arg()) * tau as f64 / (2.0 * PI);
        let m = (turns.round() as i64).rem_euclid(tau as i64) as usize;
        groups[m].push(k);
    }
    Ok(groups
        .into_iter()
        .enumerate()
        .filter(|(_, g)| !g.is_empty())
        .map(|(m, g)| Eigenspace {
            m: m as u64,
            theta: eigenvalue_label(zeta, tau, m as u64),
            basis: CMat::from_fn(d, g.len(), |i, k| v[(i, g[k])]),
        })
        .collect())
}

/// Orthogonal projectors `B B*` for each eigenspace.
pub fn spectral_projectors(spaces: &[Eigenspace]) -> Vec<CMat> {
    spaces.iter().map(Eigenspace::projector).collect()
}

/// `|P_{E'} Op P_E|` as the top singular value of `B'* Op B`.
pub fn matrix_element_sup(e: &Eigenspace, e2: &Eigenspace, op: &CMat) -> f64 {
    let block = e2.basis.adjoint() * (op * &e.basis);
    spectral_norm(&block, SUP_TOL)
}

/// All eigenvectors side by side, in eigenspace order, with the column
/// ranges of each eigenspace.
pub fn eigenbasis(spaces: &[Eigenspace]) -> (CMat, Vec<std::ops::Range<usize>>) {
    let d: usize = spaces.iter().map(Eigenspace::dim).sum();
    let mut v = CMat::zeros(d, d);
    let mut ranges = Vec::with_capacity(spaces.len());
    let mut c = 0;
    for s in spaces {
        for k in 0..s.dim() {
            for i in 0..d {
                v[(i, c + k)] = s.basis[(i, k)];
            }
        }
        ranges.push(c..c + s.dim());
        c += s.dim();
    }
    (v, ranges)
}

/// `Op(f) V` computed mode by mode on the monomial translations.
pub fn apply_observable(n: u64, g: usize, r: u64, f: &ObservableSpec, v: &CMat) -> Result<CMat> {
    let table = PhaseTable::new(2 * n);
    let mut out = CMat::zeros(v.nrows(), v.ncols());
    for (freq, &c) in &f.fourier {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let fr: Vec<u64> = freq.0.iter().map(|&x| reduce_i64(x, 2 * n)).collect();
        if fr.len() != 2 * g {
            return Err(Error::InvalidInput("observable genus does not match the state space".into()));
        }
        let t = Translation::from_reduced(n, r, &fr);
        out += t.left_mul(v, &table) * faer::Scale(c);
    }
    Ok(out)
}

/// Largest block norm of `M = V* X V` over ordered pairs of eigenspaces.
pub fn max_block_norm(spaces: &[Eigenspace], xv: &CMat, v: &CMat) -> f64 {
    let (_, ranges) = eigenbasis(spaces);
    let m = v.adjoint() * xv;
    let mut best = 0.0f64;
    for r1 in &ranges {
        for r2 in &ranges {
            let block = m.as_ref().submatrix(r2.start, r1.start, r2.len(), r1.len()).to_owned();
            best = best.max(spectral_norm(&block, SUP_TOL));
        }
    }
    best
}

/// `Delta_A(f, N)`: the largest `|P_{E'} (Op(f) - f(0) I) P_E|` over ordered
/// eigenspace pairs.
pub fn delta_for(p: &Propagator, f: &ObservableSpec) -> Result<f64> {
    if p.eigen.is_empty() {
        return Err(Error::Precondition("propagator has no eigen decomposition".into()));
    }
    let mut g = f.clone();
    g.fourier.remove(&crate::symplectic::FrequencyVector::zero(p.genus()));
    let (v, _) = eigenbasis(&p.eigen);
    let xv = apply_observable(p.n, p.genus(), p.r, &g, &v)?;
    Ok(max_block_norm(&p.eigen, &xv, &v))
}

/// `Delta_A(f, N)` with twist 1.
pub fn delta_a(a: &SymplecticMatrix, n: u64, f: &ObservableSpec) -> Result<f64> {
    delta_for(&solve_and_decompose(a, n, 1)?, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::operator::{diff_norm, spectral_norm_svd};
    use crate::symplectic::catalog::{a1, a2};
    use crate::symplectic::FrequencyVector;

    fn check(p: &Propagator) {
        let c = spectral_check(p).unwrap();
        assert!(c.completeness < 1e-8 && c.idempotence < 1e-9 && c.orthogonality < 1e-9, "{c:?}");
        assert!(c.eigenvector < 1e-8 && c.label < 1e-9, "{c:?}");
        let projs = spectral_projectors(&p.eigen);
        let d = p.dim();
        let sum = projs.iter().fold(CMat::zeros(d, d), |acc, x| acc + x);
        assert!(diff_norm(&sum, &CMat::identity(d, d)) < 1e-8);
    }

    #[test]
    fn complete_both_routes() {
        for n in [3u64, 5, 7, 11, 13, 70, 101] {
            check(&solve_and_decompose(&a1(), n, 1).unwrap());
        }
        check(&solve_and_decompose(&a2(), 5, 1).unwrap());
        check(&solve_and_decompose(&a2(), 9, 1).unwrap());
    }

    #[test]
    fn routes_agree() {
        let p = solve_propagator(&a1(), 13, 1).unwrap();
        let a = by_projectors(p.matrix(), p.quantum_period, p.phase).unwrap();
        let b = by_hermitian(p.matrix(), p.quantum_period, p.phase).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.m, y.m);
            assert!(diff_norm(&x.projector(), &y.projector()) < 1e-8);
        }
    }

    #[test]
    fn identity_elements() {
        let p = solve_and_decompose(&a1(), 7, 1).unwrap();
        let id = CMat::identity(7, 7);
        let e = &p.eigen[0];
        assert!((matrix_element_sup(e, e, &id) - 1.0).abs() < 1e-8);
        if p.eigen.len() > 1 {
            assert!(matrix_element_sup(e, &p.eigen[1], &id) < 1e-8);
        }
    }

    #[test]
    fn delta_constant_is_zero_and_mode_matches_pairs() {
        let p = solve_and_decompose(&a1(), 7, 1).unwrap();
        let c = ObservableSpec::constant(1, 2.5);
        assert!(delta_for(&p, &c).unwrap() < 1e-12);
        let f = ObservableSpec::mode(FrequencyVector::new(vec![1, 0]));
        let t = Translation::new(7, 1, &[1, 0]).unwrap().to_dense().matrix;
        let mut direct = 0.0f64;
        for e in &p.eigen {
            for e2 in &p.eigen {
                let block = e2.basis.adjoint() * (&t * &e.basis);
                direct = direct.max(spectral_norm_svd(&block));
            }
        }
        assert!((delta_for(&p, &f).unwrap() - direct).abs() < 1e-8);
        assert!(direct <= (7.0f64 * 15.0 / 81.0).powf(0.25));
    }
}
