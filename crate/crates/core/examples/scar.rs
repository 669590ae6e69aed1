//! A matrix with an invariant isotropic subspace: matrix elements along that
//! subspace stay at 1 instead of decaying.

use catmap::experiments::scar_demo;
use catmap::symplectic::catalog::{a1, a3};
use catmap::symplectic::FrequencyVector;

fn main() -> catmap::Result<()> {
    let r = scar_demo(&a3(), &[5, 9, 15, 21], None, &a1(), &FrequencyVector::new(vec![1, 0]))?;
    println!("isotropic subspace {:?}, frequency {:?}", r.isotropic.isotropy, r.freq);
    for (s, c) in r.points.iter().zip(&r.control) {
        println!("N = {:>2}  A3 {:.4}  A1 {:.4}", s.n, s.value, c.value);
    }
    Ok(())
}
