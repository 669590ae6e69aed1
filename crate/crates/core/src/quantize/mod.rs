//! The quantum side: `H_N`, translations, observables, propagators, spectra
//! and the Chinese-remainder factorization.

pub mod average;
pub mod crt;
pub mod observable;
pub mod operator;
pub mod phase;
pub mod propagator;
pub mod serialize;
pub mod spectrum;
pub mod state;
pub mod translation;

pub use average::{hs_chain, power_egorov_check, time_average_residual, trace_law_residual, twisted_average, HsChain};
pub use crt::{crt_index_map, crt_isometry, verify_tensor_propagator, verify_tensor_translation, TensorPropagatorCheck};
pub use observable::{op_assemble, ObservableSpec};
pub use operator::{spectral_norm, CMat, DenseOperator, OperatorKind};
pub use propagator::{
    egorov_residual, propagator_by_averaging, quantum_period, solve_propagator, IntertwinerReport, Propagator,
};
pub use spectrum::{delta_a, delta_for, eigen_decompose, matrix_element_sup, solve_and_decompose, spectral_check, Eigenspace, SpectralCheck};
pub use state::StateVector;
pub use translation::{law_residuals, translation_apply, LawResiduals, Translation};
