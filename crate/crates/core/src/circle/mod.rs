//! Circle-method numerics at desk scale.

mod counting;
mod functions;
mod mainterm;
mod minor;
mod params;
mod singular;
mod spectrum;

pub use counting::{
    form_classes, histogram_of, max_multiplicity, multiplicity_bound, multiplicity_histogram, shifted_count,
    stabilizer_check,
};
pub use functions::{hat_t, hat_t_fourier, ramanujan_sum, spike, spike_grid, spike_with};
pub use mainterm::{sweep_csv, CircleModel, SweepRow};
pub use minor::{dyadic_csv, minor_arc_profile, MinorArcProfile, RESOLUTION_TOLERANCE};
pub use params::{
    choose_parameters, choose_parameters_report, delta_boundary, parameter_exponents, CircleParams,
    ConstraintCheck, ExponentReport, CONSTRAINT_ERROR_BUDGET, CONSTRAINT_MINOR_I1, CONSTRAINT_MINOR_IQ,
    CONSTRAINT_SHIFT_COUNT,
};
pub use singular::{singular_series, SeriesOptions, SingularSeries};
pub use spectrum::{l2_direct, poisson_check, poisson_full, poisson_main, poisson_residual, rhat, SpectrumGrid};
