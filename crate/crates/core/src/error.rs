use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid radius: {0}")]
    InvalidRadius(String),

    #[error("exponent list does not match dimension (expected {expected}, got {got})")]
    ExponentMismatch { expected: usize, got: usize },

    #[error("total monomial degree {0} exceeds the supported cap of 32")]
    DegreeCap(usize),

    #[error("operation requires a graph model")]
    NotAGraphModel,

    #[error("point leaves the local chart: {0}")]
    ChartViolation(String),

    #[error("point is not on the model surface (distance {0:.3e})")]
    NotOnSurface(f64),

    #[error("quadrature did not converge to tolerance {tolerance:.1e} (last change {change:.3e})")]
    NonConvergence { tolerance: f64, change: f64 },

    #[error("matrix is not symmetric within tolerance (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("matrix dimension {0} exceeds the supported eigensolver cap of 64")]
    EigDimensionCap(usize),

    #[error("degenerate covariance matrix: {0}")]
    DegenerateCovariance(String),

    #[error("cannot identify the normal-direction eigenvalue (best alignment {0:.3})")]
    AmbiguousNormal(f64),

    #[error("recovered H^2 is negative beyond tolerance ({0:.3e}); minimal-surface ambiguity")]
    NegativeMeanCurvatureSquare(f64),

    #[error("patch descriptors need a usable volume: unnormalized invariants or an area estimate")]
    MissingVolume,

    #[error("too few neighbors inside the ball: need {needed}, found {found}")]
    TooFewNeighbors { needed: usize, found: usize },

    #[error("zero total weight in neighborhood")]
    ZeroWeight,

    #[error("zero eigenvalue in limit ratio")]
    ZeroEigenvalue,

    #[error("no clear spectral gap in local covariance; supply the intrinsic dimension")]
    NoSpectralGap,

    #[error("inconsistent dimensions: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
