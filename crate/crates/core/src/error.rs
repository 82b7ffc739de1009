use thiserror::Error;

use crate::cell_complex::CellKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid cell: {0}")]
    InvalidCell(String),

    #[error("operation `{op}` does not support cells of kind {kind:?}")]
    UnsupportedKind { op: &'static str, kind: CellKind },

    #[error("point {point} is not a vertex of {cell}")]
    NotAVertex { point: String, cell: String },

    #[error("vertex {0} is not interior to the manifold")]
    NotInterior(String),

    #[error("chain is not a flower: {0}")]
    NotAFlower(String),

    #[error("flower decomposition left a nonzero residual chain with {0} terms")]
    DecompositionResidual(usize),

    #[error("projection precondition violated: {0}")]
    Projection(String),

    #[error("field has no value at vertex {0}")]
    MissingVertex(String),

    #[error("vertex {0} is not part of the required input set")]
    UnexpectedVertex(String),

    #[error("field value at {0} is zero (nonsingular fields only)")]
    ZeroValue(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("argument outside the real domain: {0}")]
    Domain(String),

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("vertex {0} carries no corner equation on this cell")]
    NoCornerEquation(String),

    #[error("closure is not claimed for a field that solves neither branch")]
    ClosureNotClaimed,

    #[error("branch classification inconclusive: max |E+1| = {dev_minus:e}, max |E-1| = {dev_plus:e}")]
    Inconclusive { dev_minus: f64, dev_plus: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by singular or degenerate numeric data.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            Error::ZeroValue(_) | Error::Singular(_) | Error::NonFinite(_) | Error::Domain(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.to_string())
        } else {
            Error::Parse(e.to_string())
        }
    }
}
