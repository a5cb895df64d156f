//! Parametric curve families of the semiempirical pipeline and their
//! fitting procedures.

mod hill;
mod loglaw;
mod nelder_mead;
mod superellipse;

pub use hill::{fit_hill, fit_sigma, hill_value, HillFit, HILL_PARAM_COUNT};
pub use loglaw::{fit_log_law, LogLawFit};
pub use superellipse::{
    central_orthogonal_spread, fit_superellipse_exponent, superellipse_point, SuperellipseFit,
};
