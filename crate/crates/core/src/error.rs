use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {name} = {value} is outside the domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0} (supported: 1, 2, 3)")]
    UnsupportedDimension(usize),

    #[error("translation clips {cells} nonzero cells (measure {measure}) out of the box")]
    SupportOverflow { cells: usize, measure: f64 },

    #[error("shift component {0} is not a whole number of cells")]
    OffLattice(f64),

    #[error("ball of radius {radius} centred at {center:?} is not contained in [-{half_width}, {half_width}]^n")]
    BallOutsideBox {
        center: Vec<f64>,
        radius: f64,
        half_width: f64,
    },

    #[error("precondition not met: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
