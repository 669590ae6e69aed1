use catmap::arith::anatomy::smooth_part;
use catmap::arith::{factorize, matrix_order, mult_order};
use catmap::counting::congruence::{q_count_vector_with, Strategy as CountStrategy};
use catmap::experiments::PropagatorCache;
use catmap::experiments::Tolerances;
use catmap::quantize::serialize::{propagator_from_json, propagator_to_json};
use catmap::quantize::{egorov_residual, law_residuals, solve_and_decompose, verify_tensor_translation};
use catmap::symplectic::catalog::{a1, a2};
use catmap::symplectic::FrequencyVector;
use num_integer::Integer;
use proptest::prelude::*;

fn pow_mod(a: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1u64 % m, |acc, _| acc * a % m)
}

fn freq(g: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-6i64..=6, 2 * g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translation_laws(n in 2u64..24, r in 1i64..12, m in freq(1), k in freq(1)) {
        prop_assume!(r.gcd(&(n as i64)) == 1);
        let l = law_residuals(n, r, &m, &k).unwrap();
        prop_assert!(l.composition < 1e-10, "{l:?}");
        prop_assert!(l.commutation < 1e-10, "{l:?}");
        prop_assert!(l.power < 1e-9, "{l:?}");
        prop_assert!(l.identity == 0.0);
    }

    #[test]
    fn translation_laws_g2(n in 2u64..6, m in freq(2), k in freq(2)) {
        let l = law_residuals(n, 1, &m, &k).unwrap();
        prop_assert!(l.composition.max(l.commutation).max(l.power) < 1e-10, "{l:?}");
    }

    #[test]
    fn crt_translation(i in 0usize..5, f in freq(1)) {
        let (n1, n2) = [(2u64, 3u64), (3, 4), (3, 5), (4, 5), (5, 7)][i];
        prop_assert!(verify_tensor_translation(n1, n2, &f).unwrap() < 1e-10);
    }

    #[test]
    fn smooth_part_divides_and_is_smooth(m in 1u64..200_000, z in 2.0f64..60.0) {
        let s = smooth_part(m, z);
        prop_assert_eq!(m % s, 0);
        for (p, _) in factorize(s).unwrap().factors {
            prop_assert!((p as f64) <= z);
        }
        for (p, _) in factorize(m / s).unwrap().factors {
            prop_assert!((p as f64) > z);
        }
    }

    #[test]
    fn multiplicative_order(a in 2u64..500, m in 2u64..5000) {
        prop_assume!(a.gcd(&m) == 1);
        let r = mult_order(a, m).unwrap();
        prop_assert!(r.verify());
        let o = r.order as u64;
        prop_assert_eq!(pow_mod(a, o, m), 1);
        for (q, _) in factorize(o).unwrap().factors {
            prop_assert_ne!(pow_mod(a, o / q, m), 1 % m);
        }
    }

    #[test]
    fn matrix_order_lcm(n1 in 2u64..300, n2 in 2u64..300) {
        prop_assume!(n1.gcd(&n2) == 1);
        let joint = matrix_order(&a1(), n1 * n2).unwrap().order;
        let a = matrix_order(&a1(), n1).unwrap().order;
        let b = matrix_order(&a1(), n2).unwrap().order;
        prop_assert_eq!(joint, a.lcm(&b));
    }

    #[test]
    fn count_is_symmetric_under_negation(p in prop::sample::select(vec![5u64, 7, 11, 13, 17]), f in freq(1)) {
        let f = FrequencyVector::new(f);
        prop_assume!(!f.is_zero());
        let neg = FrequencyVector::new(f.0.iter().map(|x| -x).collect());
        let a = q_count_vector_with(&a1(), p, &f, 1, CountStrategy::Convolution).unwrap().value;
        let b = q_count_vector_with(&a1(), p, &neg, 1, CountStrategy::Convolution).unwrap().value;
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn egorov_for_random_n(n in 2u64..40, f in freq(1)) {
        let p = solve_and_decompose(&a1(), n, 1).unwrap();
        prop_assert!(egorov_residual(&p, &f).unwrap() < 1e-9);
    }

    #[test]
    fn propagator_json_roundtrip(n in 2u64..20) {
        let p = solve_and_decompose(&a1(), n, 1).unwrap();
        let back = propagator_from_json(&propagator_to_json(&p).unwrap()).unwrap();
        prop_assert_eq!(back.quantum_period, p.quantum_period);
        prop_assert_eq!(back.phase, p.phase);
        prop_assert_eq!(back.operator.matrix, p.operator.matrix);
    }
}

#[test]
fn egorov_g2() {
    let p = solve_and_decompose(&a2(), 4, 1).unwrap();
    for f in FrequencyVector::ball(2, 1) {
        assert!(egorov_residual(&p, &f.0).unwrap() < 1e-9);
    }
}

#[test]
fn cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = PropagatorCache::new(dir.path(), Tolerances::default()).unwrap();
    let mut stats = Default::default();
    let p = cache.get_or_solve(&a1(), 21, 1, &mut stats).unwrap();
    let q = cache.get_or_solve(&a1(), 21, 1, &mut stats).unwrap();
    assert_eq!(p.operator.matrix, q.operator.matrix);
    assert_eq!((stats.hits, stats.misses), (1, 1));
}
