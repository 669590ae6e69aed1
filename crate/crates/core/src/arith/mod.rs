//! Exact integer arithmetic: factorization, orders, anatomy thresholds and
//! good primes and integers.

pub mod anatomy;
pub mod factor;
pub mod good;
pub mod modular;
pub mod order;
pub mod sieve;

pub use anatomy::{anatomy_thresholds, smooth_part_s_z, AnatomyThresholds};
pub use factor::{factorize, is_prime, Factorization};
pub use good::{is_good_integer, is_good_prime, GoodIntegerReport, GoodPrimeReport, ThresholdOverrides};
pub use modular::bezout_split;
pub use order::{matrix_order, mult_order, OrderMethod, OrderRecord};
pub use sieve::{primes_up_to, progression_reciprocal_sum};
