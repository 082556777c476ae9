//! Local-global tools for orbits of thin subgroups of `SL(2, ℤ)`.

pub mod arith;
pub mod circle;
pub mod congruence;
pub mod error;
pub mod matgroup;
pub mod repr;

pub use error::{Error, Result};
