use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular state: minimum eigenvalue {min_eig:.3e} below floor {floor:.3e}")]
    SingularState { min_eig: f64, floor: f64 },

    #[error("support violation: {0}")]
    Support(String),

    #[error("generator is not primitive: kernel dimension {kernel_dim}")]
    NonPrimitive { kernel_dim: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("degenerate observable: {0}")]
    DegenerateObservable(String),

    #[error("uninformative family: Fisher information {0:.3e} at or below tolerance")]
    UninformativeFamily(f64),

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
