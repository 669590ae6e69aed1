//! Largest off-mean matrix element of a cosine observable over the
//! eigenspaces of the propagator, for a few N.

use catmap::quantize::{delta_a, ObservableSpec};
use catmap::symplectic::catalog::a1;
use catmap::symplectic::FrequencyVector;

fn main() -> catmap::Result<()> {
    let f = ObservableSpec::cosine(FrequencyVector::new(vec![1, 0]));
    for n in [7u64, 15, 21, 35, 49, 63] {
        println!("N = {n:>3}  Delta = {:.6}", delta_a(&a1(), n, &f)?);
    }
    Ok(())
}
