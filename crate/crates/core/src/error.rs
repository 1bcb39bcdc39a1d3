use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigNoConvergence { sweeps: usize, off_norm: f64 },

    #[error("singular matrix encountered in linear solve")]
    Singular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("group closure exceeded {limit} elements; generators or tolerance are wrong")]
    ClosureOverflow { limit: usize },

    #[error("group {label} has {found} elements, expected {expected}")]
    GroupOrder {
        label: String,
        found: usize,
        expected: usize,
    },

    #[error("cannot match conjugacy class (size {size}, theta {theta}) to a table label")]
    UnmatchedClass { size: usize, theta: f64 },

    #[error("character computation inconsistent: {0}")]
    CharacterMismatch(String),

    #[error("multiplicity {value} is not a non-negative integer")]
    NonIntegerMultiplicity { value: num_complex::Complex64 },

    #[error("irrep {irrep} appears with multiplicity {found}; expected {expected}")]
    Multiplicity {
        irrep: String,
        found: usize,
        expected: String,
    },

    #[error("zero-Jz construction impossible: projected Jz eigenvalues {eigenvalues:?} do not change sign")]
    NoSignChange { eigenvalues: Vec<f64> },

    #[error("code support does not follow the binary-octahedral residue structure: {0}")]
    SupportStructure(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error(
        "SDP did not converge in {iterations} iterations (primal {primal_residual:e}, dual {dual_residual:e}, gap {gap:e})"
    )]
    SolverNotConverged {
        iterations: usize,
        primal_residual: f64,
        dual_residual: f64,
        gap: f64,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
