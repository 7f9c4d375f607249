//! Sweeps, figure data and bearing totals on top of `bearingcap`.

pub mod config;
pub mod figures;
pub mod network;
pub mod report;
pub mod sweep;

use bearingcap::Execution;
use thiserror::Error;

pub use config::{Config, ConfigError, Preset};
pub use network::{aggregate_bearing, BearingNetworkSpec};
pub use report::{emit, EmitError, Table};
pub use sweep::{run_sweep, SweepReport};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] bearingcap::Error),
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// Runs `f` with `jobs` workers: `Some(1)` is sequential, `None` uses the
/// global pool.
pub fn with_jobs<R, F>(jobs: Option<usize>, f: F) -> Result<R, RunError>
where
    R: Send,
    F: FnOnce(Execution) -> R + Send,
{
    match jobs {
        Some(0) => Err(RunError::Pool("--jobs must be at least 1".into())),
        Some(1) => Ok(f(Execution::Sequential)),
        #[cfg(feature = "parallel")]
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(|| f(Execution::Parallel)))
            .map_err(|e| RunError::Pool(e.to_string())),
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(f(Execution::Sequential)),
        None => Ok(f(Execution::Parallel)),
    }
}
