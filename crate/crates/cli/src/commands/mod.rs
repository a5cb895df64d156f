pub mod fit_stripe;
pub mod montecarlo;
pub mod robustness;
pub mod simulate;
pub mod sweep;
pub mod validate;
