//! Propagators `U_{N,r}(A)` with the exact Egorov property
//! `U* T(n) U = T(nA)`.

use super::operator::{vecmat, CMat, DenseOperator, OperatorKind};
use super::phase::PhaseTable;
use super::spectrum::Eigenspace;
use super::state::dimension;
use super::translation::{reduce_twist, Translation};
use crate::arith::factor::factorize;
use crate::arith::order::matrix_order;
use crate::symplectic::{ModMatrix, SymplecticMatrix};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Largest Hilbert-space dimension for dense operators.
pub const DEFAULT_DIM_GUARD: usize = 4096;

/// Largest dimension at which unitarity is checked densely instead of by probes.
const DENSE_UNITARITY_LIMIT: usize = 1024;

/// Shape of the solution space of the intertwining equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntertwinerReport {
    /// Orbits of the generator action on matrix positions.
    pub orbits: usize,
    /// Orbits whose phase cycles close up; this is the nullspace dimension.
    pub dimension: usize,
    /// Nonzero entries of the solution.
    pub support: usize,
}

#[derive(Clone, Debug)]
pub struct Propagator {
    pub a: SymplecticMatrix,
    pub n: u64,
    /// Twist reduced modulo `2N`.
    pub r: u64,
    pub operator: DenseOperator,
    pub quantum_period: u64,
    /// `U^{quantum_period} = phase * I`.
    pub phase: Complex64,
    pub eigen: Vec<Eigenspace>,
    pub intertwiner: IntertwinerReport,
}

impl Propagator {
    pub fn genus(&self) -> usize {
        self.a.genus()
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn matrix(&self) -> &CMat {
        &self.operator.matrix
    }
}

/// Solve `T(e_i) X = X T(e_i B)` for the generators, with `B` given modulo `2N`.
///
/// Entry `(Q, S)` is tied to `(Q + s_i, S + t_i)` by a phase, where `s_i` and
/// `t_i` are the position parts of `e_i` and `e_i B`; each orbit of this
/// action either has consistent phases (one free scalar) or forces zeros.
pub fn solve_intertwiner(b: &ModMatrix, n: u64, r: u64) -> Result<(CMat, IntertwinerReport)> {
    let dim2 = b.dim;
    let g = dim2 / 2;
    let two_n = 2 * n;
    if b.modulus != two_n {
        return Err(Error::InvalidInput("intertwiner matrix must be reduced modulo 2N".into()));
    }
    let d = dimension(n, g);
    let nodes = d.checked_mul(d).filter(|&x| x < u32::MAX as usize).ok_or_else(|| {
        Error::ResourceGuard(format!("dimension {d} too large for the intertwiner solver"))
    })?;
    struct Gen {
        qmap: Vec<u32>,
        smap: Vec<u32>,
        alpha: Vec<u32>,
        beta: Vec<u32>,
    }
    let gens: Vec<Gen> = (0..dim2)
        .map(|i| {
            let mut e = vec![0u64; dim2];
            e[i] = 1;
            let m: Vec<u64> = (0..dim2).map(|j| b.get(i, j)).collect();
            let te = Translation::from_reduced(n, r, &e);
            let tm = Translation::from_reduced(n, r, &m);
            Gen { qmap: te.column, smap: tm.column, alpha: te.phase, beta: tm.phase }
        })
        .collect();
    const UNSEEN: u32 = u32::MAX;
    let mut pot = vec![UNSEEN; nodes];
    let mut comp = vec![0u32; nodes];
    let mut consistent: Vec<bool> = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..nodes {
        if pot[start] != UNSEEN {
            continue;
        }
        let id = consistent.len() as u32;
        consistent.push(true);
        pot[start] = 0;
        comp[start] = id;
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            let (q, s) = (x / d, x % d);
            for gen in &gens {
                let y = gen.qmap[q] as usize * d + gen.smap[s] as usize;
                let c = (gen.beta[s] as u64 + two_n - gen.alpha[q] as u64) % two_n;
                let want = ((pot[x] as u64 + c) % two_n) as u32;
                if pot[y] == UNSEEN {
                    pot[y] = want;
                    comp[y] = id;
                    queue.push_back(y);
                } else if pot[y] != want {
                    consistent[id as usize] = false;
                }
            }
        }
    }
    let dimension_found = consistent.iter().filter(|&&c| c).count();
    let mut report = IntertwinerReport { orbits: consistent.len(), dimension: dimension_found, support: 0 };
    if dimension_found != 1 {
        return Err(Error::Precondition(format!(
            "intertwiner space has dimension {dimension_found}, expected 1"
        )));
    }
    let keep = consistent.iter().position(|&c| c).unwrap() as u32;
    let support = comp.iter().filter(|&&c| c == keep).count();
    report.support = support;
    let scale = (d as f64 / support as f64).sqrt();
    let table = PhaseTable::new(two_n);
    let mut u = CMat::zeros(d, d);
    for x in 0..nodes {
        if comp[x] == keep {
            u[(x / d, x % d)] = table.get(pot[x] as u64) * scale;
        }
    }
    Ok((u, report))
}

fn check_unitary(u: &CMat, seed: u64) -> Result<f64> {
    let d = u.nrows();
    let resid = if d <= DENSE_UNITARITY_LIMIT {
        super::operator::unitarity_residual(u)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..4 {
            let v: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let w = super::operator::matvec(u, &v);
            let nv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            let nw: f64 = w.iter().map(|x| x.norm_sqr()).sum();
            worst = worst.max((nw - nv).abs() / nv);
        }
        worst
    };
    if resid > 1e-10 {
        return Err(Error::Numerical(format!("propagator unitarity residual {resid:e}")));
    }
    Ok(resid)
}

fn check_inputs(a: &SymplecticMatrix, n: u64, r: i64, guard: usize) -> Result<u64> {
    if n < 1 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    if !a.parity_ok() {
        return Err(Error::Precondition(
            "quantization needs A = I mod 2; use parity_reduce first".into(),
        ));
    }
    let d = (n as usize).checked_pow(a.genus() as u32).unwrap_or(usize::MAX);
    if d > guard {
        return Err(Error::ResourceGuard(format!(
            "N^g = {d} exceeds the dense-operator guard {guard}"
        )));
    }
    reduce_twist(r, n)
}

/// Normalized intertwiner for `A` (first nonzero entry real positive).
pub fn propagator_matrix(a: &SymplecticMatrix, n: u64, r: i64) -> Result<(CMat, IntertwinerReport)> {
    let rr = check_inputs(a, n, r, DEFAULT_DIM_GUARD)?;
    let (u, report) = solve_intertwiner(&a.to_mod(2 * n), n, rr)?;
    check_unitary(&u, n)?;
    Ok((u, report))
}

/// Build `U_{N,r}(A)` with its quantum period and phase; the eigenspaces
/// are filled by [`super::spectrum::eigen_decompose`].
pub fn solve_propagator(a: &SymplecticMatrix, n: u64, r: i64) -> Result<Propagator> {
    solve_propagator_guarded(a, n, r, DEFAULT_DIM_GUARD)
}

pub fn solve_propagator_guarded(a: &SymplecticMatrix, n: u64, r: i64, guard: usize) -> Result<Propagator> {
    let rr = check_inputs(a, n, r, guard)?;
    let (u, report) = solve_intertwiner(&a.to_mod(2 * n), n, rr)?;
    check_unitary(&u, n)?;
    let tau = quantum_period_structural(a, n, rr)?;
    let phase = power_phase(a, &u, n, rr, tau)?;
    Ok(Propagator {
        a: a.clone(),
        n,
        r: rr,
        operator: DenseOperator::new(n, a.genus(), OperatorKind::Propagator, u),
        quantum_period: tau,
        phase,
        eigen: Vec::new(),
        intertwiner: report,
    })
}

/// Least `t` with `T(e_i A^t) = T(e_i)` as operators for every generator,
/// which is exactly when `U^t` is scalar. It divides `ord(A, 2N)`.
pub fn quantum_period_structural(a: &SymplecticMatrix, n: u64, r: u64) -> Result<u64> {
    let two_n = 2 * n;
    let ord = matrix_order(a, two_n)?
        .order_u64()
        .ok_or_else(|| Error::BoundExceeded("ord(A, 2N) exceeds 64 bits".into()))?;
    let am = a.to_mod(two_n);
    let g = a.genus();
    let fixes = |t: u64| {
        let p = am.pow(t);
        (0..2 * g).all(|i| {
            let m: Vec<u64> = (0..2 * g).map(|j| p.get(i, j)).collect();
            let pos_ok = (0..2 * g).all(|j| m[j] % n == u64::from(i == j) % n);
            let dot: u128 = (0..g).map(|j| m[j] as u128 * m[g + j] as u128).sum();
            pos_ok && (r as u128 * dot) % two_n as u128 == 0
        })
    };
    factorize(ord)?
        .divisors()
        .into_iter()
        .find(|&t| fixes(t))
        .ok_or_else(|| Error::Numerical("no divisor of ord(A, 2N) fixes the translations".into()))
}

/// The scalar `c` with `U(A)^t = c U(A^t)`, where both propagators are
/// normalized; for `t` the quantum period this is the phase `zeta`.
///
/// Uses square-and-multiply on propagators of powers of `A`, each product
/// being compared on a single row, so the cost is `O(D^2 log t)`.
pub fn power_phase(a: &SymplecticMatrix, u: &CMat, n: u64, r: u64, t: u64) -> Result<Complex64> {
    let two_n = 2 * n;
    let base = a.to_mod(two_n);
    let mut c = Complex64::new(1.0, 0.0);
    let mut k = 1u64;
    let mut w = u.clone();
    let relate = |lhs_row0: Vec<Complex64>, target: &CMat| -> Result<Complex64> {
        let j = (0..target.ncols())
            .find(|&j| target[(0, j)].norm() > 1e-9)
            .ok_or_else(|| Error::Numerical("propagator row 0 vanishes".into()))?;
        let d = lhs_row0[j] / target[(0, j)];
        if (d.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::Numerical(format!("power phase not unimodular: |d| = {}", d.norm())));
        }
        Ok(d / d.norm())
    };
    let row0 = |m: &CMat| -> Vec<Complex64> { (0..m.ncols()).map(|j| m[(0, j)]).collect() };
    for bit in (0..63 - t.leading_zeros()).rev() {
        let k2 = 2 * k;
        let (w2, _) = solve_intertwiner(&base.pow(k2), n, r)?;
        let d = relate(vecmat(&row0(&w), &w), &w2)?;
        c = c * c * d;
        k = k2;
        w = w2;
        if (t >> bit) & 1 == 1 {
            let (w3, _) = solve_intertwiner(&base.pow(k + 1), n, r)?;
            let d = relate(vecmat(&row0(&w), u), &w3)?;
            c *= d;
            k += 1;
            w = w3;
        }
    }
    debug_assert_eq!(k, t);
    Ok(c)
}

/// `(t, zeta)` with `t <= cap` least such that `U^t = zeta I`, detected on a
/// pseudo-random vector.
pub fn quantum_period(u: &CMat, cap: u64, tol: f64) -> Result<(u64, Complex64)> {
    let d = u.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let v: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let nv: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let mut w = v.clone();
    for t in 1..=cap {
        w = super::operator::matvec(u, &w);
        let z: Complex64 = w.iter().zip(&v).map(|(a, b)| a * b.conj()).sum::<Complex64>() / nv;
        let resid: f64 = w.iter().zip(&v).map(|(a, b)| (a - b * z).norm_sqr()).sum::<f64>();
        if resid.sqrt() <= tol * nv.sqrt() {
            return Ok((t, z / z.norm()));
        }
    }
    Err(Error::BoundExceeded(format!(
        "no quantum period up to cap {cap}; raise the cap"
    )))
}

/// Default cap for [`quantum_period`]: `4 ord(A, 2N)`.
pub fn default_period_cap(a: &SymplecticMatrix, n: u64) -> Result<u64> {
    Ok(4 * matrix_order(a, 2 * n)?.order_u64().unwrap_or(u64::MAX / 4))
}

/// Group-averaging projection onto intertwiners:
/// `X -> (2N)^{-2g} sum_k T(k) X T(kA)^{-1}`, seeded with `I` and reseeded
/// pseudo-randomly if the projection vanishes. Normalized like
/// [`solve_propagator`]. Cost `O((2N)^{2g} D^2)`.
pub fn propagator_by_averaging(a: &SymplecticMatrix, n: u64, r: i64) -> Result<CMat> {
    let rr = check_inputs(a, n, r, DEFAULT_DIM_GUARD)?;
    let g = a.genus();
    let d = dimension(n, g);
    let two_n = 2 * n;
    let am = a.to_mod(two_n);
    let table = PhaseTable::new(two_n);
    let count = (two_n as usize).pow(2 * g as u32);
    for attempt in 0..3u64 {
        let seed: Option<CMat> = if attempt == 0 {
            None
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(attempt);
            Some(CMat::from_fn(d, d, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)))
        };
        let mut x = CMat::zeros(d, d);
        for code in 0..count {
            let mut k = vec![0u64; 2 * g];
            let mut c = code;
            for slot in k.iter_mut() {
                *slot = (c % two_n as usize) as u64;
                c /= two_n as usize;
            }
            let ka = am.row_mul(&k);
            let t1 = Translation::from_reduced(n, rr, &k);
            let t2 = Translation::from_reduced(n, rr, &ka);
            // (T1 X0 T2^*)[Q, j] = e(phi1(Q)) X0[c1(Q), c2(j)] conj(e(phi2(j)))
            match &seed {
                None => {
                    let mut inv2 = vec![0usize; d];
                    for (j, &cj) in t2.column.iter().enumerate() {
                        inv2[cj as usize] = j;
                    }
                    for q in 0..d {
                        let j = inv2[t1.column[q] as usize];
                        x[(q, j)] += table.get(t1.phase[q] as u64) * table.get(t2.phase[j] as u64).conj();
                    }
                }
                Some(x0) => {
                    for j in 0..d {
                        let right = table.get(t2.phase[j] as u64).conj();
                        let cj = t2.column[j] as usize;
                        for q in 0..d {
                            x[(q, j)] += table.get(t1.phase[q] as u64) * x0[(t1.column[q] as usize, cj)] * right;
                        }
                    }
                }
            }
        }
        let fro = x.norm_l2();
        if fro < 1e-6 * count as f64 {
            continue;
        }
        let scale = (d as f64).sqrt() / fro;
        let mut u = x * faer::Scale(Complex64::new(scale, 0.0));
        let (q0, s0) = (0..d * d)
            .map(|idx| (idx / d, idx % d))
            .find(|&(q, s)| u[(q, s)].norm() > 1e-9)
            .unwrap();
        let ph = u[(q0, s0)].conj() / u[(q0, s0)].norm();
        u = u * faer::Scale(ph);
        if super::operator::unitarity_residual(&u) > 1e-8 {
            return Err(Error::Numerical("averaged intertwiner is not proportional to a unitary".into()));
        }
        return Ok(u);
    }
    Err(Error::Numerical("group average vanished for every seed".into()))
}

/// `|T(n) U - U T(nA)|_F / |T(n)|_F`, which equals the relative Egorov
/// residual `|U* T(n) U - T(nA)|_F / |T(n)|_F` for unitary `U`.
pub fn egorov_residual(p: &Propagator, freq: &[i64]) -> Result<f64> {
    let n = p.n;
    let two_n = 2 * n;
    let f: Vec<u64> = freq.iter().map(|&x| crate::arith::modular::reduce_i64(x, two_n)).collect();
    let fa = p.a.to_mod(two_n).row_mul(&f);
    let t = Translation::from_reduced(n, p.r, &f);
    let ta = Translation::from_reduced(n, p.r, &fa);
    let table = PhaseTable::new(two_n);
    let lhs = t.left_mul(p.matrix(), &table);
    let rhs = ta.right_mul(p.matrix(), &table);
    Ok((lhs - rhs).norm_l2() / (p.dim() as f64).sqrt())
}

/// The same residual computed literally as `U* T(n) U - T(nA)` with dense products.
pub fn egorov_residual_dense(p: &Propagator, freq: &[i64]) -> Result<f64> {
    let t = Translation::new(p.n, p.r as i64, freq)?.to_dense().matrix;
    let fa: Vec<i64> = {
        let a = p.a.to_i64().ok_or_else(|| Error::BoundExceeded("matrix entries exceed i64".into()))?;
        let d = freq.len();
        (0..d)
            .map(|j| {
                (0..d)
                    .map(|i| ((freq[i] as i128 * a[i][j] as i128).rem_euclid(2 * p.n as i128)) as i64)
                    .sum::<i64>()
            })
            .collect()
    };
    let ta = Translation::new(p.n, p.r as i64, &fa)?.to_dense().matrix;
    let u = p.matrix();
    let conj = u.adjoint() * (&t * u);
    Ok((conj - ta).norm_l2() / (p.dim() as f64).sqrt())
}
