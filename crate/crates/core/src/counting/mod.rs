//! Congruence counts, Mordell sums, the moment identity and the matrix-element
//! inequalities they feed.

pub mod bounds;
pub mod congruence;
pub mod mordell;

pub use bounds::{fit_decay, kr_inequality, kr_inequality_check, zero_divisor_bound_check, DecayFit, KrReport, ZeroDivisorReport};
pub use congruence::{q_count_matrix, q_count_vector, r_count, CountMethod, CountResult, Strategy};
pub use mordell::{moment_identity_check, mordell_partial_sum, MomentCheck, MordellSum};
