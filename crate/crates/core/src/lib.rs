//! Quantized cat maps on the torus `T^{2g}` and the arithmetic that controls
//! their eigenfunctions.
//!
//! The crate is organised in five layers:
//!
//! * [`arith`]: factorization, multiplicative orders of residues and matrices,
//!   smooth parts, anatomy thresholds and good primes/integers.
//! * [`symplectic`]: exact linear algebra for the classical map (validation,
//!   characteristic polynomials, zero-divisors, invariant subspaces).
//! * [`quantize`]: the Hilbert space `L^2((Z/NZ)^g)`, translation operators,
//!   propagators with the exact Egorov property, spectral decomposition and
//!   the Chinese-remainder tensor factorization.
//! * [`counting`]: congruence counts, Mordell sums, moment identities and the
//!   matrix-element inequality they feed.
//! * [`experiments`]: scans, reports, caching and the `catmap` command line.

pub mod arith;
pub mod counting;
pub mod error;
pub mod experiments;
pub mod quantize;
pub mod symplectic;

pub use error::{Error, Result};
