//! Linear forms along parabolic cosets, the represented set, exceptional
//! sets, and the smoothed representation function.

pub mod forms;
pub mod psi;
pub mod rfunc;
pub mod window;

pub use forms::{linear_form, orbit_value, precompose_fix, LinearForm, PRECOMPOSE_RADIUS};
pub use psi::{psi_eval, psi_hat, psi_hat_tail_negligible, psi_mass};
pub use rfunc::{representation_function, rn_table, x_range, Ensemble, RnTable};
pub use window::{
    exceptional_csv, exceptional_in, exceptional_oracle, exceptional_set, represent_set, represent_set_with,
    represented_by_products,
    stabilize_exceptional, verify_witness, RepWindow, Stabilization, Witness,
};
