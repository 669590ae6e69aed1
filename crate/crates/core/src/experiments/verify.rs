//! The invariant suite run by `catmap verify`: one verdict per property at
//! pinned parameters.

use super::config::Tolerances;
use crate::arith::order::{matrix_order, matrix_order_brute};
use crate::arith::anatomy::smooth_part_s_z;
use crate::arith::modular::lcm;
use crate::counting::bounds::{kr_inequality_check, max_translation_element};
use crate::counting::congruence::{q_count_vector_with, r_count_with, Strategy};
use crate::counting::moment_identity_check;
use crate::quantize::average::time_average_residual;
use crate::quantize::propagator::egorov_residual;
use crate::quantize::{
    law_residuals, solve_and_decompose, spectral_check, verify_tensor_propagator, verify_tensor_translation, Propagator,
};
use crate::symplectic::catalog::{a1, a2};
use crate::symplectic::{FrequencyVector, SymplecticMatrix};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Verdict {
    /// Passes when `value <= tolerance`.
    pub fn at_most(property: &str, value: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Verdict { property: property.into(), passed: value <= tolerance, value, tolerance, detail: detail.into() }
    }

    pub fn exact(property: &str, ok: bool, detail: impl Into<String>) -> Self {
        Verdict { property: property.into(), passed: ok, value: if ok { 0.0 } else { 1.0 }, tolerance: 0.0, detail: detail.into() }
    }

    fn failed(property: &str, err: crate::Error) -> Self {
        Verdict { property: property.into(), passed: false, value: f64::NAN, tolerance: 0.0, detail: err.to_string() }
    }
}

fn catch(property: &str, f: impl FnOnce() -> Result<Verdict>) -> Verdict {
    f().unwrap_or_else(|e| Verdict::failed(property, e))
}

fn max_egorov(p: &Propagator, freqs: &[FrequencyVector]) -> Result<f64> {
    freqs.iter().try_fold(0.0f64, |acc, f| Ok(acc.max(egorov_residual(p, &f.0)?)))
}

fn nonzero_ball(g: usize, bound: i64) -> Vec<FrequencyVector> {
    FrequencyVector::ball(g, bound).into_iter().filter(|f| !f.is_zero()).collect()
}

/// Run every property; the suite passes iff every verdict passes.
pub fn verify_suite(tol: &Tolerances, seed: u64) -> Vec<Verdict> {
    let mut out = Vec::new();
    let (a1, a2) = (a1(), a2());
    let ball1 = nonzero_ball(1, 3);
    let ball2 = nonzero_ball(2, 1);

    let mut props = Vec::new();
    for n in [3u64, 4, 5, 7, 9, 15] {
        match solve_and_decompose(&a1, n, 1) {
            Ok(p) => props.push(p),
            Err(e) => out.push(Verdict::failed(&format!("propagator A1 N={n}"), e)),
        }
    }
    let p2 = solve_and_decompose(&a2, 5, 1);

    for p in &props {
        out.push(catch("egorov", || {
            Ok(Verdict::at_most("egorov", max_egorov(p, &ball1)?, tol.egorov, format!("A1 N={} |n|<=3", p.n)))
        }));
    }
    if let Ok(p) = &p2 {
        out.push(catch("egorov", || Ok(Verdict::at_most("egorov", max_egorov(p, &ball2)?, tol.egorov, "A2 N=5 |n|<=1"))));
    }

    for n in [3u64, 4, 5, 7] {
        out.push(catch("operator_law", || {
            let mut worst = 0.0f64;
            for m in &ball1[..8] {
                for k in &ball1[8..16] {
                    let l = law_residuals(n, 1, &m.0, &k.0)?;
                    worst = worst.max(l.composition).max(l.commutation).max(l.power).max(l.identity);
                }
            }
            Ok(Verdict::at_most("operator_law", worst, tol.operator_law, format!("g=1 N={n}")))
        }));
    }
    out.push(catch("operator_law", || {
        let l = law_residuals(5, 2, &[1, 0, 2, 1], &[0, 1, 1, 1])?;
        let worst = l.composition.max(l.commutation).max(l.power).max(l.identity);
        Ok(Verdict::at_most("operator_law", worst, tol.operator_law, "g=2 N=5 r=2"))
    }));

    for (n1, n2) in [(3u64, 5u64), (3, 7), (5, 7)] {
        out.push(catch("crt_translation", || {
            let r = verify_tensor_translation(n1, n2, &[1, 2])?;
            Ok(Verdict::at_most("crt_translation", r, tol.crt_translation, format!("g=1 N={}x{}", n1, n2)))
        }));
        out.push(catch("crt_propagator", || {
            let r = verify_tensor_propagator(&a1, n1, n2)?.residual;
            Ok(Verdict::at_most("crt_propagator", r, tol.crt_propagator, format!("A1 N={}x{}", n1, n2)))
        }));
    }
    out.push(catch("crt_translation", || {
        let r = verify_tensor_translation(3, 5, &[1, 0, 2, 1])?;
        Ok(Verdict::at_most("crt_translation", r, tol.crt_translation, "g=2 N=3x5"))
    }));
    out.push(catch("crt_propagator", || {
        let r = verify_tensor_propagator(&a2, 3, 5)?.residual;
        Ok(Verdict::at_most("crt_propagator", r, tol.crt_propagator, "A2 N=3x5"))
    }));

    let spectral: Vec<&Propagator> = props.iter().chain(p2.as_ref().ok()).collect();
    for p in &spectral {
        let label = format!("g={} N={}", p.genus(), p.n);
        match spectral_check(p) {
            Ok(c) => {
                out.push(Verdict::at_most("completeness", c.completeness, tol.completeness, label.clone()));
                out.push(Verdict::at_most("projector", c.idempotence.max(c.orthogonality), tol.projector, label.clone()));
                out.push(Verdict::at_most("eigenvector", c.eigenvector, tol.eigenvector, label));
            }
            Err(e) => out.push(Verdict::failed("completeness", e)),
        }
    }

    out.push(catch("time_average", || {
        let p = props.iter().find(|p| p.n == 7).ok_or_else(|| crate::Error::Numerical("no N=7 propagator".into()))?;
        let worst = ball1.iter().try_fold(0.0f64, |acc, f| Ok::<_, crate::Error>(acc.max(time_average_residual(p, &f.0)?)))?;
        Ok(Verdict::at_most("time_average", worst, tol.time_average, "A1 N=7"))
    }));

    out.push(catch("count_oracles", || {
        let f = FrequencyVector::new(vec![1, 0]);
        let conv = q_count_vector_with(&a1, 7, &f, 1, Strategy::Convolution)?.value;
        let exh = q_count_vector_with(&a1, 7, &f, 1, Strategy::Exhaustive)?.value;
        let r = r_count_with(&a1, 7, 1, Strategy::Exhaustive)?.value;
        Ok(Verdict::exact("count_oracles", conv == exh && conv == r && r == 15, format!("Q={conv} Q'={exh} R={r} at p=7")))
    }));
    for p in [7u64, 17] {
        out.push(catch("moment", || {
            let m = moment_identity_check(&a1, p, 1)?;
            let rel = (m.lhs - m.rhs as f64).abs() / m.rhs as f64;
            Ok(Verdict::at_most("moment", rel, tol.moment, format!("p={p} lhs={} rhs={}", m.lhs, m.rhs)))
        }));
    }

    for p in props.iter().filter(|p| p.n > 2) {
        out.push(catch("kr_inequality", || {
            let mut gap = f64::NEG_INFINITY;
            for f in ball1.iter().take(8) {
                let k = kr_inequality_check(p, f, 1)?;
                gap = gap.max(k.lhs - k.rhs);
            }
            Ok(Verdict::at_most("kr_inequality", gap, tol.inequality, format!("A1 N={} max(lhs - rhs)", p.n)))
        }));
    }
    if let Ok(p) = &p2 {
        out.push(catch("kr_inequality", || {
            let k = kr_inequality_check(p, &FrequencyVector::new(vec![1, 0, 0, 0]), 1)?;
            Ok(Verdict::at_most("kr_inequality", k.lhs - k.rhs, tol.inequality, "A2 N=5 zero-divisor n"))
        }));
    }

    out.push(catch("zero_divisor", || {
        let full = max_translation_element(&solve_and_decompose(&a2, 7, 1)?, &[1, 0, 0, 0])?;
        let block = max_translation_element(&solve_and_decompose(&a1, 7, 1)?, &[1, 0])?;
        Ok(Verdict::at_most("zero_divisor", (full - block).abs(), tol.zero_divisor, format!("p=7 {full} vs {block}")))
    }));

    out.push(catch("order_algebra", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bad = Vec::new();
        for _ in 0..20 {
            let k = rng.gen_range(1..4u64);
            let n = rng.gen_range(2..2000u64);
            let ak = a1.pow(k);
            let fast = matrix_order(&ak, n)?.order;
            let slow = matrix_order_brute(&ak, n, 10_000_000)?.order;
            if fast != slow {
                bad.push(format!("A^{k} N={n}: {fast} vs {slow}"));
            }
        }
        for (n1, n2) in [(7u64, 15u64), (17, 23), (9, 35)] {
            let joint = matrix_order(&a1, n1 * n2)?.order;
            let parts = lcm_u128(matrix_order(&a1, n1)?.order, matrix_order(&a1, n2)?.order);
            if joint != parts {
                bad.push(format!("lcm at {n1}x{n2}"));
            }
        }
        Ok(Verdict::exact("order_algebra", bad.is_empty(), bad.join("; ")))
    }));

    out.push(Verdict::exact("anatomy", smooth_part_s_z(77, 10.0) == 60, "s_10(77) = 60"));
    out.push(catch("symplectic", || {
        let ok = SymplecticMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).is_err();
        Ok(Verdict::exact("symplectic", ok, "singular matrix rejected"))
    }));
    out
}

fn lcm_u128(a: u128, b: u128) -> u128 {
    match (u64::try_from(a), u64::try_from(b)) {
        (Ok(x), Ok(y)) => lcm(x, y) as u128,
        _ => {
            let (mut x, mut y) = (a, b);
            while y != 0 {
                (x, y) = (y, x % y);
            }
            a / x * b
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes_and_tiny_tolerance_fails() {
        let v = verify_suite(&Tolerances::default(), 0);
        let failed: Vec<_> = v.iter().filter(|x| !x.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
        let v = verify_suite(&Tolerances::uniform(1e-30), 0);
        assert!(v.iter().any(|x| !x.passed));
    }
}
