//! Good primes, split densities and the density of good integers for A1.

use catmap::arith::ThresholdOverrides;
use catmap::experiments::{good_integer_density, good_primes, split_density};
use catmap::symplectic::catalog::{a1, a2};

fn main() -> catmap::Result<()> {
    let good = good_primes(&a1(), 200, None)?;
    let list: Vec<u64> = good.iter().filter(|r| r.is_good).map(|r| r.p).collect();
    println!("good primes <= 200: {list:?}");

    let s1 = split_density(&a1(), 10_000)?;
    let s2 = split_density(&a2(), 10_000)?;
    println!("A1 split fraction {:.4}, A2 completely split fraction {:.4}", s1.fraction, s2.fraction);

    let ov = ThresholdOverrides { window: Some((3.0, 100.0)), ..Default::default() };
    for x in [1_000u64, 10_000] {
        let d = good_integer_density(&a1(), x, &ov)?;
        println!("x = {x:>6}  good = {:>5}  density = {:.4}", d.good, d.density);
    }
    Ok(())
}
