//! Exact linear algebra over the rationals: characteristic and minimal
//! polynomials, squarefree decomposition, certified root moduli, and the
//! growth signature `(ρ, s)` of a square matrix.

pub mod growth;
pub mod matrix;
pub mod poly;
pub mod products;
pub mod roots;
pub mod spectral;

pub use growth::{growth_signature, growth_signature_with, GrowthOptions, GrowthSignature, RhoExact};
pub use matrix::ExactMatrix;
pub use poly::{squarefree_decomposition, ExactPoly};
pub use products::{exp_nilpotent, exterior_power, tensor_product};
pub use roots::{root_moduli, RootEstimate};
pub use spectral::{char_poly, min_poly, nilpotency_index, quasi_unipotent_order};
