//! Library side of the `sl2c` tool.

pub mod derive;
pub mod report;
pub mod suites;
pub mod tables;

#[derive(Debug, thiserror::Error)]
pub enum WbError {
    #[error(transparent)]
    Core(#[from] sl2c_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("configuration: {0}")]
    Config(String),
}

impl WbError {
    /// Process exit code: configuration problems are 2, everything else 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            WbError::Config(_) => 2,
            _ => 1,
        }
    }
}
