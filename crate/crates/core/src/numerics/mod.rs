//! Exact small-N SK expectations by enumeration and Gaussian quadrature.

mod checks;
mod expect;
mod model;
mod observable;
mod quadrature;

pub use checks::{
    beta_derivative_check, beta_second_derivative_ratio, effective_beta_check, first_derivative,
    fourth_derivative, lambda_derivative_check, rate_trend, relative_error, richardson, second_derivative,
    NumericReport, RateRow, BETA_TOLERANCE, DEFAULT_BETA_STEP, DEFAULT_LAMBDA_STEP, EFFECTIVE_BETA_TOLERANCE,
    LAMBDA_TOLERANCE, RATIO_TOLERANCE,
};
pub use expect::{averaged_deformed_expect_many, deformed_expect, quenched_expect, quenched_expect_many};
pub use model::{
    all_configurations, coupling_count, overlap, overlap_kernel, Configuration, GibbsState, KernelMode, SpinModel,
    MAX_SPINS,
};
pub use quadrature::{hermite_standard, GaussianRule, NeumaierSum, QuadratureSpec, MAX_QUADRATURE_DIM};
