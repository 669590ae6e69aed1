//! For coprime N1, N2 the propagator at N1*N2 is the tensor product of the
//! propagators at N1 and N2 with twisted Planck constants.

use catmap::quantize::{verify_tensor_propagator, verify_tensor_translation};
use catmap::symplectic::catalog::{a1, a2};

fn main() -> catmap::Result<()> {
    for (n1, n2) in [(3u64, 5u64), (5, 7), (7, 9)] {
        let t = verify_tensor_translation(n1, n2, &[1, 2])?;
        let u = verify_tensor_propagator(&a1(), n1, n2)?;
        println!("A1 {n1}x{n2}: translation residual {t:.2e}, propagator residual {:.2e}, phase {:.4}", u.residual, u.phase);
    }
    let u = verify_tensor_propagator(&a2(), 3, 5)?;
    println!("A2 3x5: propagator residual {:.2e}", u.residual);
    Ok(())
}
