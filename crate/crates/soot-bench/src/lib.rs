//! Synthetic seismic blind-deconvolution benchmark: data generation,
//! experiment orchestration, and the CSV/JSON artifact layer over
//! `soot-core`.

pub mod config;
pub mod metrics;
pub mod runner;
pub mod synth;

/// Benchmark failure classes; each maps to a distinct process exit code.
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// Bad configuration or command-line usage (exit 1).
    #[error("config: {0}")]
    Config(String),
    /// A solver run failed or broke its descent guarantee (exit 2).
    #[error("solver: {0}")]
    Solver(String),
    /// Filesystem trouble (exit 3).
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 1,
            BenchError::Solver(_) => 2,
            BenchError::Io { .. } => 3,
        }
    }
}
