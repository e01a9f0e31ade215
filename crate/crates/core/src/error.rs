use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q - 1/q is degenerate (|q - 1/q| = {0:e}); use the classical (XXX) mode")]
    DegenerateDenominator(f64),

    #[error("invalid deformation parameter: {0}")]
    InvalidDeformation(String),

    #[error("operation requires q in {expected} mode")]
    WrongMode { expected: &'static str },

    #[error("2*ell must be a nonnegative integer, got ell = {0}")]
    BadSpin(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("lowest-weight sectors span rank {rank} < {dim}")]
    CompletenessFailure { rank: usize, dim: usize },

    #[error("R-operator has a pole at sector {0}")]
    PoleAtSector(usize),

    #[error("eigenvector basis is numerically singular (condition number {0:e})")]
    SingularBasis(f64),

    #[error("no closed-form R-matrix for spin pair ({0}, {1})")]
    UnsupportedPair(String, String),

    #[error("{what} is not scalar (off-scalar residual {residual:e})")]
    NotScalar { what: String, residual: f64 },

    #[error("cyclic representations have different orders ({0} vs {1})")]
    OrderMismatch(u32, u32),

    #[error("N must be odd, got {0}")]
    EvenOrder(u32),

    #[error("shift law {relation} violated at m = {m} (residual {residual:e})")]
    ShiftLawViolation {
        m: usize,
        relation: &'static str,
        residual: f64,
    },

    #[error("defining relations of R conflict on the joint span (residual {0:e})")]
    InconsistentConstraints(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
