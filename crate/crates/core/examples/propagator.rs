//! Solve for the quantized cat map of A1 and check that it intertwines
//! translations.
//!
//! cargo run --example propagator -- 15

use catmap::quantize::{egorov_residual, solve_and_decompose};
use catmap::symplectic::catalog::a1;
use catmap::symplectic::FrequencyVector;

fn main() -> catmap::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(15);
    let p = solve_and_decompose(&a1(), n, 1)?;
    println!("N = {n}, dim = {}, quantum period = {}, phase = {:.6}", p.dim(), p.quantum_period, p.phase);
    let mut worst = 0.0f64;
    for f in FrequencyVector::ball(1, 3).into_iter().filter(|f| !f.is_zero()) {
        worst = worst.max(egorov_residual(&p, &f.0)?);
    }
    println!("max Egorov residual over |n| <= 3: {worst:.3e}");
    for e in &p.eigen {
        println!("  eigenspace m = {:>3}  theta = {:.4}  dim = {}", e.m, e.theta, e.dim());
    }
    Ok(())
}
