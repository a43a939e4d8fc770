//! Multichannel partial-wave amplitudes and their generators.

mod channels;
mod document;
mod partial_wave;
mod random;
mod smatrix;
pub mod wave;

pub use channels::{Channel, ChannelSet, WeightMode};
pub use document::{
    format_amplitudes, load_amplitudes, parse_amplitudes, save_amplitudes, AmplitudeDocument,
    CoefficientRecord,
};
pub use partial_wave::{h_multiplier, project, ModeKey, PartialWaveAmplitude};
pub use random::{random_amplitude, random_channels};
pub use smatrix::{
    amplitudes_from_smatrix, hard_sphere_model, hard_sphere_phase_shift, random_smatrix_model,
    random_unitary, rotate_axial, AmplitudeFamily, SMatrixModel, UNITARITY_TOLERANCE,
};
