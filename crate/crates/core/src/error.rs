use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    /// Malformed file: bad magic, truncated payload, wrong header fields.
    #[error("format error: {0}")]
    Format(String),

    /// Well-formed file or raster whose contents break a value invariant.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point ({x}, {y}) lies outside the world")]
    OutOfBounds { x: f64, y: f64 },

    #[error("rejection sampling gave up after {attempts} attempts")]
    DegenerateLayout { attempts: usize },

    #[error("expert planning failed: {0}")]
    Unsolvable(String),

    #[error("internal error: {0}")]
    Internal(String),
}
