//! Integer `SL(2, ℤ)` matrices, finitely generated subgroups given by
//! generators, and enumeration of their norm balls.

pub mod ball;
pub mod delta;
pub mod gamma2;
pub mod linear;
pub mod mat2;
pub mod oracle;
pub mod spec;

pub use ball::{
    ball_bound, count_ball, enumerate_ball, enumerate_ball_with, ensemble_ball, filter_angular,
    filter_angular_with, visit_ball, Ball, EnumLimits, DEFAULT_ANGULAR_DIVISOR,
};
pub use delta::{estimate_delta, estimate_delta_with, DeltaEstimate};
pub use linear::{angular_ok, form_coefficients, pairing};
pub use mat2::{mat_mul, norm_sq, word_product, Mat2, ENTRY_GUARD};
pub use oracle::{word_ball, word_ball_monotone, WORD_ORACLE_LIMIT};
pub use spec::GroupSpec;
