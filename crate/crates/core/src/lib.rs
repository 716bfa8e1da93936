//! Categorical entropy, categorical polynomial entropy and (polynomial)
//! dynamical degrees, computed from numerical invariants with exact
//! arithmetic and cross-checked against brute-force growth fits.

pub mod error;
pub mod exact_linalg;
pub mod growth_estimator;
pub mod quiver_hereditary;
pub mod sl2z_dynamics;
pub mod twist_zoo;
pub mod variety_dynamics;

pub use error::{Error, ErrorKind, Result};
