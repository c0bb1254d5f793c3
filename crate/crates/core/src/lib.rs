//! Ollivier-Ricci curvature of undirected graphs, computed with exact optimal
//! transport, together with the network models and measurements used to study
//! it on Internet-like topologies.

pub mod bench;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod ricci;
pub mod transport;

pub use error::{Error, Result};
pub use graph::{EdgeId, Graph};
pub use ricci::{AlphaParam, CurvatureMap};
pub use transport::{MassDistribution, Rational, TransportPlan};

/// Runs `f` on a dedicated pool of `workers` threads. Every parallel
/// operation in this crate gives the same result for any worker count.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
