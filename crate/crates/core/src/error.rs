use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("tensor entry ({i},{j},{k}) breaks the j<->k symmetry")]
    NotSymmetric { i: usize, j: usize, k: usize },

    #[error("matrix is not symmetric at ({0},{1})")]
    MatrixNotSymmetric(usize, usize),

    #[error("singular matrix where an invertible one is required")]
    SingularMatrix,

    #[error("poles must be pairwise distinct")]
    DuplicatePoles,

    #[error("{0} requires an exact scalar domain")]
    ExactDomainRequired(&'static str),

    #[error("not representable as a Fuchsian potential: {0}")]
    NotRepresentable(String),

    #[error("indeterminate cross-ratio: {0}")]
    IndeterminateCrossRatio(String),

    #[error("not a gDHB algebra: {0}")]
    NotGdhb(String),

    #[error("integration path comes within {dist:.3e} of a pole (clearance {clearance:.3e}); move the path")]
    PathClearance { dist: f64, clearance: f64 },

    #[error("y1 vanishes along the path (|y1| = {0:.3e}); perturb the path midpoint and retry")]
    ResampleNeeded(f64),

    #[error("step size underflow at parameter {0}")]
    StepUnderflow(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
