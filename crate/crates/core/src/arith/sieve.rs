//! Prime enumeration.

use crate::{Error, Result};

/// Largest bound accepted by the sieve.
pub const SIEVE_LIMIT: u64 = 100_000_000;

/// All primes `<= x` by an odd-only sieve of Eratosthenes.
pub fn primes_up_to(x: u64) -> Result<Vec<u64>> {
    if x > SIEVE_LIMIT {
        return Err(Error::BoundExceeded(format!("sieve bound {x} exceeds {SIEVE_LIMIT}")));
    }
    if x < 2 {
        return Ok(vec![]);
    }
    // index i stands for 2i + 1
    let half = ((x - 1) / 2 + 1) as usize;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= x as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = vec![2];
    out.extend((0..half).filter(|&i| !composite[i]).map(|i| 2 * i as u64 + 1));
    Ok(out)
}

/// `sum 1/p` over primes `p <= x` with `q | p^j - 1`.
pub fn progression_reciprocal_sum(x: u64, q: u64, j: u32) -> Result<f64> {
    if q < 2 || j == 0 {
        return Err(Error::InvalidInput("need q >= 2 and j >= 1".into()));
    }
    Ok(primes_up_to(x)?
        .into_iter()
        .filter(|&p| p % q != 0 && super::modular::pow_mod(p, j as u64, q) == 1)
        .map(|p| 1.0 / p as f64)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_primality() {
        let ps = primes_up_to(10_000).unwrap();
        let oracle: Vec<u64> = (2..=10_000).filter(|&n| super::super::factor::is_prime(n)).collect();
        assert_eq!(ps, oracle);
        assert_eq!(primes_up_to(1).unwrap(), Vec::<u64>::new());
        assert_eq!(primes_up_to(2).unwrap(), vec![2]);
        assert_eq!(primes_up_to(9).unwrap(), vec![2, 3, 5, 7]);
    }

    #[test]
    fn reciprocal_sums() {
        assert!((progression_reciprocal_sum(10, 3, 1).unwrap() - 1.0 / 7.0).abs() < 1e-15);
        assert_eq!(progression_reciprocal_sum(2, 5, 1).unwrap(), 0.0);
        let want = 1.0 / 11.0 + 1.0 / 31.0 + 1.0 / 41.0;
        assert!((progression_reciprocal_sum(50, 5, 1).unwrap() - want).abs() < 1e-15);
    }
}
