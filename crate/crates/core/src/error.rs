use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("gram matrix is not skew-symmetric with zero diagonal: {0}")]
    NotSkewSymmetric(String),

    #[error("the given set of functionals is not unimodular")]
    NonUnimodularSet,

    #[error("boundary group is trivial; no generator of positive order exists")]
    BoundaryTrivial,

    #[error("form is not hyperbolic (genus {genus}, torsion pairs {torsion}, zero rank {zero_rank})")]
    NotHyperbolic {
        genus: usize,
        torsion: usize,
        zero_rank: usize,
    },

    #[error("resource limit exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        needed: usize,
        cap: usize,
    },

    #[error("negative dimension {value} at bidegree ({g},{d}): the series is not free over the slope-zero generator")]
    NegativeDimension { g: u32, d: u32, value: String },

    #[error("monomial basis at bidegree ({g},{d}) exceeds cap {cap}")]
    TruncationOverflow { g: u32, d: u32, cap: usize },

    #[error("grading flavor mismatch: cannot add an N-graded index to an Arf-graded index")]
    FlavorMismatch,

    #[error("unsupported coefficients: {0}")]
    UnsupportedCoefficients(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
