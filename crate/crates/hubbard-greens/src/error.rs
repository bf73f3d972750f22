use thiserror::Error;

/// Errors surfaced by the simulator and oracle layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { max_asymmetry: f64, tolerance: f64 },

    #[error(
        "Jacobi diagonalization did not converge within {sweeps} sweeps (off-norm {off_norm:.3e})"
    )]
    EigenNoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error(
        "element-level circuit does not reproduce the closed-form ansatz (max deviation {0:.3e})"
    )]
    InconsistentLayout(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
