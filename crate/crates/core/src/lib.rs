//! Distance-dependent scattered flux of multichannel quantum scattering.
//!
//! Given partial-wave amplitudes `f(n) = sum_lm Y_l^m(n) B^lm` for each exit
//! channel, the crate evaluates the scattered differential flux through a
//! sphere of finite radius `R`, its expansion in `1/(kR)`, and the
//! conservation, unitarity and optical-theorem identities that hold at every
//! `R`. The free Green function and its multipole and asymptotic forms are
//! available as an independent oracle.

pub mod amplitudes;
pub mod error;
pub mod flux;
pub mod greens;
pub mod numeric;
pub mod poly;
pub mod special;

pub use amplitudes::{
    AmplitudeFamily, Channel, ChannelSet, PartialWaveAmplitude, SMatrixModel, WeightMode,
};
pub use error::{Error, Result};
pub use flux::{FluxProfile, WronskianSeries};
pub use numeric::{DoubleDouble, Real};
pub use special::{AngularGrid, ChiPolynomial, UnitVector};
