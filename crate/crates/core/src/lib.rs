//! Exact arithmetic for superinduced modules over GL(m|n): super polynomials,
//! the localization K[G], superderivations, minors and floor elements.

pub mod derivation;
pub mod error;
pub mod floors;
pub mod fraction;
pub mod linalg;
pub mod linkage;
pub mod lr;
pub mod minors;
pub mod rules;
pub mod scalar;
pub mod suites;
pub mod superpoly;
pub mod weights;

pub use error::{Error, Result};
