//! Error type shared by the whole crate.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Asked for the primitive form of the zero vector.
    #[error("zero direction")]
    ZeroDirection,

    /// Input did not form a valid exponential polynomial.
    #[error("invalid exponential polynomial: {0}")]
    InvalidPoly(String),

    /// Simultaneous root iteration ran out of rounds; carries the best iterate.
    #[error("root iteration did not converge after {rounds} rounds (residual {residual:.3e})")]
    RootsDiverged {
        rounds: usize,
        residual: f64,
        best: Vec<Complex64>,
    },

    /// Gradient requested on a shell hyperplane; carries the violating plane indices.
    #[error("non-smooth point: lies on shell plane(s) {planes:?}")]
    NonSmoothPoint { planes: Vec<usize> },

    /// Modular system with linearly dependent directions.
    #[error("dependent directions")]
    DependentDirections,

    /// No independent edge tuple, or singular S matrix.
    #[error("degenerate arrangement")]
    DegenerateArrangement,

    /// Operation not available in this dimension or configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The 2d sampler solves for the first variable, which is absent.
    #[error("rotate coordinates: polynomial does not depend on z1")]
    RotateCoordinates,

    /// The shrunken normal cone for the requested epsilon is empty.
    #[error("epsilon too large: shrunken normal cone is empty")]
    EmptyCone,
}

pub type Result<T> = std::result::Result<T, Error>;
