use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient agents: need at least {required}, got {actual}")]
    InsufficientAgents { required: usize, actual: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite coordinate encountered: {0}")]
    NonFinite(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("agent {index} is not inside the feasible region")]
    Infeasible { index: usize },

    #[error("window of area {area} does not fit inside the domain")]
    WindowTooLarge { area: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InsufficientAgents { .. } => 3,
            Error::DimensionMismatch { .. } => 4,
            Error::NonFinite(_) | Error::Degenerate(_) => 5,
            Error::InvalidConfig(_) | Error::Toml(_) => 2,
            Error::Infeasible { .. } => 6,
            Error::WindowTooLarge { .. } => 7,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 8,
        }
    }
}
