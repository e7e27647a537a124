use thiserror::Error;

use crate::product::Decision;

/// Errors surfaced by the kernel.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid primitive {primitive}: {reason}")]
    InvalidPrimitive { primitive: String, reason: String },

    #[error("product is not defined at ({}, {})", .0.witness.as_ref().map_or(0, |w| w.i), .0.witness.as_ref().map_or(0, |w| w.k))]
    UndefinedProduct(Box<Decision>),

    /// A product line did not fit the eventually quasi-affine form. Signals an internal bug.
    #[error("product profile requires tails of degree >= 2: {0}")]
    ProfileDegreeOverflow(String),

    #[error("witness sequence is not eventually quasi-affine: {0}")]
    WitnessInexpressible(String),

    #[error("no inequality witness found within a {0}x{0} window")]
    WitnessSearchExhausted(usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown matrix name `{0}`")]
    UnknownName(String),

    #[error("instance spec unsatisfiable after {0} rejections")]
    SpecUnsatisfiable(usize),
}

impl Error {
    /// True for errors that indicate a bug in the kernel rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::ProfileDegreeOverflow(_)
                | Error::WitnessInexpressible(_)
                | Error::WitnessSearchExhausted(_)
                | Error::Invariant(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
