//! Congruence counts, the moment identity for Mordell sums, and the
//! matrix-element inequality they feed.

use catmap::counting::{kr_inequality, moment_identity_check, q_count_vector, r_count};
use catmap::symplectic::catalog::a1;
use catmap::symplectic::FrequencyVector;

fn main() -> catmap::Result<()> {
    let a = a1();
    let n = FrequencyVector::new(vec![1, 0]);
    for p in [7u64, 17, 23] {
        let q = q_count_vector(&a, p, &n, 1)?;
        let r = r_count(&a, p, 1)?;
        let m = moment_identity_check(&a, p, 1)?;
        println!("p = {p:>2}  tau = {:>2}  Q = {:>4}  R = {:>4}  moment = {:.3} (exact {})", q.tau, q.value, r.value, m.lhs, m.rhs);
    }
    for p in [7u64, 17, 23] {
        let k = kr_inequality(&a, p, 1, &n, 1)?;
        println!("p = {p:>2}  max element {:.4}  lhs {:.4e} <= rhs {:.4e}: {}", k.max_element, k.lhs, k.rhs, k.holds);
    }
    Ok(())
}
