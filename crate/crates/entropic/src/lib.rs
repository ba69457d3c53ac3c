//! Entropy-conservative and entropy-stable split-form discretizations of
//! hyperbolic balance laws with nonconservative products.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conditions;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod fluxes;
pub mod mesh;
pub mod sbp;
pub mod semidisc;
pub mod systems;
pub mod timeint;

pub use error::{Error, Result};
pub use sbp::SbpOperator;
pub use systems::{Normal, System, X_DIR};
