//! Free radial solutions, spherical harmonics and sphere quadrature.

mod bessel;
pub(crate) mod chi;
mod harmonics;
mod quadrature;

pub use bessel::{i_pow, regular_psi, riccati_neumann, spherical_jn};
pub use chi::{chi, chi_scaled, half_wronskian_polynomial, ChiPolynomial};
pub use harmonics::{legendre, lm_count, lm_index, sph_harm, sph_harm_all, UnitVector};
pub use quadrature::{gauss_legendre, gauss_legendre_sphere, AngularGrid};
