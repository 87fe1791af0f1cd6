//! Lax Gray cylinders over Θ-cells, computed through Steiner complexes.

pub mod dac;
pub mod error;
pub mod gray;
pub mod lattice;
pub mod nu;
pub mod pr;
pub mod span;
pub mod theta;

pub use error::{Error, Result};
