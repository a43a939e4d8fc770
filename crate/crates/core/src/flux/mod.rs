//! Scattered differential flux through a sphere of finite radius `R`.
//!
//! For exit channel `beta` with `z = -i k_beta R` the flux is
//!
//! ```text
//! dSigma/dOmega = sum_beta w_beta sum_{l,j} conj(a_l(n)) a_j(n) W_jl(z)
//! ```
//!
//! where `a_l = sum_m B^{lm} Y_l^m` and `W_jl` is the half-Wronskian of
//! `chi_j(z)` and `chi_l(-z)`, a polynomial in `1/(2z)` that equals 1 on the
//! diagonal. Off-diagonal terms carry the `R` dependence and integrate to
//! zero over the sphere, so the total flux equals `sum_beta sigma_beta` at
//! every distance.

mod cross_sections;
mod evaluator;
mod profile;
pub mod series;
mod unitarity;
mod wronskian;

pub use cross_sections::{cross_sections, cross_sections_on, CrossSections};
pub use evaluator::{
    default_grid_order, differential_flux_asymptotic, differential_flux_exact, total_flux,
    FluxEvaluator, REALNESS_TOLERANCE,
};
pub use profile::{flux_profile, FluxProfile, FluxSample};
pub use series::{printed_series_diagnostic, SeriesCheck, MAX_ORDER};
pub use unitarity::{optical_theorem_defect, optical_theorem_defect_at, unitarity_defect};
pub use wronskian::{
    delta, half_wronskian_exact, integral_representation_check, upsilon, wronskian_series,
    WronskianSeries,
};
