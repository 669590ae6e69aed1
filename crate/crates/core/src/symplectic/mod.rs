//! Exact linear algebra for the classical map.

pub mod charpoly;
pub mod fp_poly;
pub mod linalg;
pub mod matrix;
pub mod modmat;
pub mod poly;
pub mod subspace;
pub mod zero_divisor;

pub use charpoly::{char_poly, char_poly_info, root_of_unity_checks, CharPolyInfo, RootOfUnityReport};
pub use matrix::{catalog, symplectic_form, SymplecticMatrix};
pub use modmat::ModMatrix;
pub use poly::IntPoly;
pub use subspace::{invariant_subspace_split, zero_divisor_split, InvariantSplit, Isotropy, ModSubspace, SubspaceDescriptor};
pub use zero_divisor::{eigenvalues_mod_p, is_zero_divisor, FrequencyVector};
