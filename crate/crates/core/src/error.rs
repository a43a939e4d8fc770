use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("unknown channel {0}")]
    UnknownChannel(usize),

    #[error("invalid channel set: {0}")]
    InvalidChannels(String),

    #[error("S-matrix model is not unitary (max |S^dagger S - 1| = {0:e})")]
    NonUnitary(f64),

    #[error("missing reciprocal amplitude data for entrance channel {0}")]
    MissingReciprocal(usize),

    #[error("amplitude for entrance channel {0} is not axially symmetric about the incident axis")]
    NotRotatable(usize),

    #[error("asymptotic order {0} is unsupported (terms are known through order 4)")]
    UnsupportedOrder(u32),

    #[error("flux is not real: imaginary residue {residue:e} against scale {scale:e}")]
    Hermiticity { residue: f64, scale: f64 },

    #[error("integral did not converge: {0}")]
    NotConverged(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("amplitude document: {0}")]
    Document(String),
}
