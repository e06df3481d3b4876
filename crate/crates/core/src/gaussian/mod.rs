//! Hermite coefficients, series identities, stationary-dice variance series
//! and the 1/n pair-probability predictors.

pub mod constants;
pub mod hermite;
pub mod series;

pub use crate::kernel::{c_asymptotic, s_kernel};
pub use constants::{pair_prob_asymptotic, DistConstants, PairProbKind};
pub use hermite::{
    hermite_coeff, hermite_poly, identity_partial_sum, odd_energy, HermiteSeries, IdentityKind,
};
pub use series::{
    beta_constant, diff_variance_leading_term, phi_product_expectation, variance_diff_series,
    variance_w_series, ALPHA,
};
