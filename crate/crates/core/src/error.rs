use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("duplicate interpolation nodes")]
    DuplicateNodes,

    #[error("matrices do not commute")]
    NonCommuting,

    #[error("matrix is not in the ring spanned by the generators")]
    NotInRing,

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("eigenvalue iteration failed to converge")]
    EigenConvergence,

    #[error("variety verification failed after {0} attempts")]
    VarietyVerification(usize),

    #[error("dual space dimension failed to stabilize within order cap {0}")]
    DualSpaceUnstable(usize),

    #[error("local multiplicities sum to {got}, expected normal-set size {expected}")]
    MultiplicityMismatch { got: usize, expected: usize },

    #[error("dual-basis matrix is numerically singular (condition {0:.3e})")]
    SingularDualBasis(f64),

    #[error("singular linear system")]
    SingularSystem,

    #[error("Waring decomposition failed its expansion check (residual {0:.3e})")]
    DecompositionCheck(f64),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
