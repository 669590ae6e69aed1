//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance` (add `--release` for speed).

use catmap::arith::anatomy::{anatomy_thresholds, smooth_exceedance_fraction, smooth_part_s_z};
use catmap::arith::order::{matrix_order, matrix_order_brute};
use catmap::arith::{is_good_integer, ThresholdOverrides};
use catmap::counting::bounds::{kr_inequality_check, max_translation_element, zero_divisor_bound_check};
use catmap::counting::congruence::{q_count_vector_with, r_count_with, Strategy};
use catmap::counting::moment_identity_check;
use catmap::experiments::split_density;
use catmap::quantize::propagator::{egorov_residual, solve_propagator};
use catmap::quantize::{
    law_residuals, solve_and_decompose, spectral_check, verify_tensor_propagator, verify_tensor_translation,
};
use catmap::symplectic::catalog::{a1, a2, a3};
use catmap::symplectic::FrequencyVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const EGOROV_TOL: f64 = 1e-10;
const EGOROV_BUDGET: Duration = Duration::from_secs(60);
const LAW_TOL: f64 = 1e-12;
const CRT_TRANSLATION_TOL: f64 = 1e-12;
const CRT_PROPAGATOR_TOL: f64 = 1e-8;
const COMPLETENESS_TOL: f64 = 1e-8;
const PROJECTOR_TOL: f64 = 1e-9;
const EIGENVECTOR_TOL: f64 = 1e-8;
const MOMENT_REL_TOL: f64 = 1e-6;
const INEQUALITY_TOL: f64 = 1e-8;
const ZERO_DIVISOR_TOL: f64 = 1e-8;
const SPLIT_WINDOW: (f64, f64) = (0.45, 0.55);
const COMPLETE_SPLIT_WINDOW: (f64, f64) = (0.20, 0.30);
const SPLIT_BUDGET: Duration = Duration::from_secs(10);
const ANATOMY_REL_TOL: f64 = 0.01;
const EXCEEDANCE_NOISE: f64 = 0.02;
const ORDER_CASES: usize = 50;
const QUE_MAX_N: u64 = 1500;
const QUE_SAMPLES: usize = 40;
const QUE_WINDOW: (f64, f64) = (3.0, 100.0);
const SCAR_FLOOR: f64 = 0.3;
const QUE_BUDGET: Duration = Duration::from_secs(15 * 60);

/// Pinned from the first run of the convolution/exhaustive oracles.
const Q2_P17: u128 = 168;
const Q2_P23: u128 = 231;

const TESTED_N: [u64; 10] = [3, 4, 5, 7, 9, 11, 13, 15, 21, 35];

type Outcome = Result<String, String>;

fn ball(g: usize, bound: i64) -> Vec<FrequencyVector> {
    FrequencyVector::ball(g, bound).into_iter().filter(|f| !f.is_zero()).collect()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    }
}

fn egorov_exactness() -> Outcome {
    let start = Instant::now();
    let freqs = ball(1, 3);
    let mut worst = 0.0f64;
    for n in TESTED_N {
        let p = solve_propagator(&a1(), n, 1).map_err(err)?;
        for f in &freqs {
            worst = worst.max(egorov_residual(&p, &f.0).map_err(err)?);
        }
    }
    let t = start.elapsed();
    check(
        worst <= EGOROV_TOL && t < EGOROV_BUDGET,
        format!("max residual {worst:.2e} over {} N x {} n, {:.1}s", TESTED_N.len(), freqs.len(), t.as_secs_f64()),
    )
}

fn operator_laws() -> Outcome {
    let wide = ball(1, 3);
    let narrow = ball(1, 1);
    let (mut comp, mut comm, mut pow, mut id) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in TESTED_N {
        for (i, m) in wide.iter().enumerate() {
            let l = law_residuals(n, 1, &m.0, &wide[(i * 7 + 3) % wide.len()].0).map_err(err)?;
            comp = comp.max(l.composition);
            comm = comm.max(l.commutation);
            pow = pow.max(l.power);
            id = id.max(l.identity);
        }
        for m in &narrow {
            for k in &narrow {
                let l = law_residuals(n, 1, &m.0, &k.0).map_err(err)?;
                comp = comp.max(l.composition);
                comm = comm.max(l.commutation);
            }
        }
    }
    check(
        comp <= LAW_TOL && comm <= LAW_TOL && pow <= LAW_TOL && id == 0.0,
        format!("composition {comp:.1e}, commutation {comm:.1e}, N-th power {pow:.1e}, T(0) - I {id:.1e}"),
    )
}

fn crt_factorization() -> Outcome {
    let mut tr = 0.0f64;
    let mut pr = 0.0f64;
    for (n1, n2) in [(3u64, 5u64), (3, 7), (5, 7)] {
        for f in ball(1, 3) {
            tr = tr.max(verify_tensor_translation(n1, n2, &f.0).map_err(err)?);
        }
        pr = pr.max(verify_tensor_propagator(&a1(), n1, n2).map_err(err)?.residual);
    }
    for f in ball(2, 1) {
        tr = tr.max(verify_tensor_translation(3, 5, &f.0).map_err(err)?);
    }
    pr = pr.max(verify_tensor_propagator(&a2(), 3, 5).map_err(err)?.residual);
    check(
        tr <= CRT_TRANSLATION_TOL && pr <= CRT_PROPAGATOR_TOL,
        format!("translation {tr:.1e}, propagator {pr:.1e} (N = 15, 21, 35 and A2 at 15)"),
    )
}

fn spectral_completeness() -> Outcome {
    let (mut c, mut p, mut e) = (0.0f64, 0.0f64, 0.0f64);
    let mut cases: Vec<_> = TESTED_N.iter().map(|&n| (a1(), n)).collect();
    cases.push((a2(), 15));
    for (a, n) in cases {
        let s = spectral_check(&solve_and_decompose(&a, n, 1).map_err(err)?).map_err(err)?;
        c = c.max(s.completeness);
        p = p.max(s.idempotence).max(s.orthogonality);
        e = e.max(s.eigenvector);
    }
    check(
        c <= COMPLETENESS_TOL && p <= PROJECTOR_TOL && e <= EIGENVECTOR_TOL,
        format!("sum P - I {c:.1e}, projector laws {p:.1e}, eigenvectors {e:.1e}"),
    )
}

fn counting_oracles() -> Outcome {
    let f = FrequencyVector::new(vec![1, 0]);
    let mut notes = Vec::new();
    let mut ok = true;
    for (p, expected) in [(7u64, 15u128), (17, Q2_P17), (23, Q2_P23)] {
        let conv = q_count_vector_with(&a1(), p, &f, 1, Strategy::Convolution).map_err(err)?.value;
        let exh = q_count_vector_with(&a1(), p, &f, 1, Strategy::Exhaustive).map_err(err)?.value;
        let r_conv = r_count_with(&a1(), p, 1, Strategy::Convolution).map_err(err)?.value;
        let r_exh = r_count_with(&a1(), p, 1, Strategy::Exhaustive).map_err(err)?.value;
        let m = moment_identity_check(&a1(), p, 1).map_err(err)?;
        let rel = (m.lhs - m.rhs as f64).abs() / m.rhs as f64;
        ok &= conv == expected && exh == expected && r_conv == expected && r_exh == expected;
        ok &= m.rhs == expected && rel <= MOMENT_REL_TOL;
        notes.push(format!("p={p}: Q={conv}/{exh} R={r_conv}/{r_exh} moment={:.6}", m.lhs));
    }
    check(ok, notes.join("; "))
}

fn kr_inequality() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for n in TESTED_N {
        let p = solve_and_decompose(&a1(), n, 1).map_err(err)?;
        for f in ball(1, 3) {
            let k = kr_inequality_check(&p, &f, 1).map_err(err)?;
            worst = worst.max(k.lhs - k.rhs);
            cases += 1;
        }
    }
    let zd = [vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 0, 1, 0]];
    for n in [5u64, 7, 15] {
        let p = solve_and_decompose(&a2(), n, 1).map_err(err)?;
        for f in &zd {
            let k = kr_inequality_check(&p, &FrequencyVector::new(f.clone()), 1).map_err(err)?;
            worst = worst.max(k.lhs - k.rhs);
            cases += 1;
        }
    }
    check(worst <= INEQUALITY_TOL, format!("max(LHS - RHS) = {worst:.3e} over {cases} cases"))
}

fn zero_divisor_consistency() -> Outcome {
    let f = FrequencyVector::new(vec![1, 0, 0, 0]);
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for p in [7u64, 17, 23] {
        let full = zero_divisor_bound_check(&a2(), p, 1, &f).map_err(err)?.value;
        let block = max_translation_element(&solve_and_decompose(&a1(), p, 1).map_err(err)?, &[1, 0]).map_err(err)?;
        worst = worst.max((full - block).abs());
        notes.push(format!("p={p}: {full:.6}"));
    }
    check(worst <= ZERO_DIVISOR_TOL, format!("{} (max gap {worst:.1e})", notes.join(", ")))
}

fn split_densities() -> Outcome {
    let start = Instant::now();
    let s1 = split_density(&a1(), 10_000).map_err(err)?;
    let s2 = split_density(&a2(), 10_000).map_err(err)?;
    let t = start.elapsed();
    let inside = |x: f64, w: (f64, f64)| w.0 <= x && x <= w.1;
    check(
        inside(s1.fraction, SPLIT_WINDOW) && inside(s2.fraction, COMPLETE_SPLIT_WINDOW) && t < SPLIT_BUDGET,
        format!(
            "split {}/{} = {:.4}, completely split {}/{} = {:.4}, {:.2}s",
            s1.split, s1.unramified, s1.fraction, s2.split, s2.unramified, s2.fraction, t.as_secs_f64()
        ),
    )
}

fn anatomy() -> Outcome {
    let s = smooth_part_s_z(77, 10.0);
    let x: f64 = 1e6;
    let (l1, l2) = (x.ln(), x.ln().ln());
    let l3 = l2.ln();
    let (v, w, d) = ((l2.sqrt()).exp().exp(), (l1 * l3 / l2).exp(), l1.powf(l3 * l3));
    let t = anatomy_thresholds(x, 1).map_err(err)?;
    let close = |a: f64, b: f64| (a - b).abs() <= ANATOMY_REL_TOL * b;
    let thresholds_ok = close(t.v, v) && close(t.w, w) && close(t.d, d) && close(t.v, 156.9) && close(t.w, 160.7) && close(t.d, 11.6);
    let fr: Vec<f64> = [1_000u64, 10_000, 100_000]
        .iter()
        .map(|&x| smooth_exceedance_fraction(x, 1, None))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let trend_ok = fr.windows(2).all(|w| w[1] <= w[0] + EXCEEDANCE_NOISE);
    check(
        s == 60 && thresholds_ok && trend_ok,
        format!(
            "s_10(77)={s}, V={:.2} W={:.2} D={:.2}, exceedance {:.4} {:.4} {:.4}{}",
            t.v,
            t.w,
            t.d,
            fr[0],
            fr[1],
            fr[2],
            if trend_ok { "" } else { " (rises by more than the noise allowance)" }
        ),
    )
}

fn order_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = Vec::new();
    for _ in 0..ORDER_CASES {
        let base = if rng.gen_bool(0.5) { a1() } else { a2() };
        let k = rng.gen_range(1..=4u64);
        let n = rng.gen_range(2..=10_000u64);
        let a = base.pow(k);
        let fast = matrix_order(&a, n).map_err(err)?.order;
        let slow = matrix_order_brute(&a, n, 100_000_000).map_err(err)?.order;
        if fast != slow {
            bad.push(format!("A^{k} mod {n}: {fast} vs {slow}"));
        }
    }
    let mut lcm_cases = 0;
    for _ in 0..ORDER_CASES {
        let n1 = rng.gen_range(2..=100u64);
        let n2 = rng.gen_range(2..=100u64);
        if num_integer::gcd(n1, n2) != 1 {
            continue;
        }
        let joint = matrix_order(&a1(), n1 * n2).map_err(err)?.order;
        let parts = num_integer::lcm(matrix_order(&a1(), n1).map_err(err)?.order, matrix_order(&a1(), n2).map_err(err)?.order);
        lcm_cases += 1;
        if joint != parts {
            bad.push(format!("lcm identity at {n1} x {n2}"));
        }
    }
    check(bad.is_empty(), format!("{ORDER_CASES} order cases, {lcm_cases} lcm cases; {}", if bad.is_empty() { "all exact".into() } else { bad.join("; ") }))
}

fn que_trend() -> Outcome {
    let start = Instant::now();
    let ov = ThresholdOverrides { window: Some(QUE_WINDOW), ..Default::default() };
    let mut good = Vec::new();
    for n in 2..=QUE_MAX_N {
        if is_good_integer(&a1(), n, &ov).map_err(err)?.is_good {
            good.push(n);
        }
    }
    let sample: Vec<u64> = (0..QUE_SAMPLES).map(|i| good[i * (good.len() - 1) / (QUE_SAMPLES - 1)]).collect();
    let mut deltas = Vec::new();
    for &n in &sample {
        let p = solve_and_decompose(&a1(), n, 1).map_err(err)?;
        deltas.push(max_translation_element(&p, &[1, 0]).map_err(err)?);
    }
    let k = QUE_SAMPLES / 10;
    let bottom = median(&mut deltas[..k].to_vec());
    let top = median(&mut deltas[QUE_SAMPLES - k..].to_vec());

    let scar_n = [5u64, 9, 15, 21, 31, 45, 63];
    let mut scar_min = f64::INFINITY;
    for n in scar_n {
        let p = solve_and_decompose(&a3(), n, 1).map_err(err)?;
        scar_min = scar_min.min(max_translation_element(&p, &[1, 0, 0, 0]).map_err(err)?);
    }
    let t = start.elapsed();
    check(
        top < bottom && scar_min >= SCAR_FLOOR && top < SCAR_FLOOR && t < QUE_BUDGET,
        format!(
            "{} good N <= {QUE_MAX_N}, {QUE_SAMPLES} sampled: bottom-decile median {bottom:.4}, top-decile median {top:.4}; \
             A3 min {scar_min:.4} over N <= 63 vs A1 control {top:.4}; {:.0}s",
            good.len(),
            t.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Egorov exactness", egorov_exactness),
        ("operator laws", operator_laws),
        ("CRT factorization", crt_factorization),
        ("spectral completeness", spectral_completeness),
        ("counting oracles", counting_oracles),
        ("matrix-element inequality", kr_inequality),
        ("zero-divisor factorization", zero_divisor_consistency),
        ("split-prime density", split_densities),
        ("anatomy functions", anatomy),
        ("order algebra", order_algebra),
        ("QUE trend and scar", que_trend),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
