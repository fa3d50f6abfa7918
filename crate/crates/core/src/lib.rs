//! Densest-subgraph estimation under edge-level differential privacy.
//!
//! The crate provides three layers:
//!
//! * [`graph`]: compact undirected graphs, edge-list parsing, induced
//!   densities with exact integer arithmetic.
//! * [`noise`] and [`psum`]: the discrete noise primitives every private
//!   release goes through, plus noisy running totals over bounded streams.
//! * [`oracles`] and [`densest`]: non-private reference solvers and the two
//!   private peeling algorithms (heap-based quasilinear, bucket-based linear).
//!
//! All randomness is drawn from caller-supplied [`rand::Rng`] handles, so
//! every run is reproducible from a seed.

pub mod densest;
pub mod graph;
pub mod noise;
pub mod oracles;
pub mod psum;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// Arguments outside a function's documented domain.
    #[error("{0}")]
    Domain(String),
    /// Operation invalid for the object's current state.
    #[error("{0}")]
    State(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use densest::{
    dp_densest_linear, dp_densest_linear_noiseless, dp_densest_linear_run,
    dp_densest_quasilinear, dp_densest_quasilinear_noiseless, dp_densest_quasilinear_run,
    release_density, PeelRun, PrivacyBudget,
};
pub use graph::{DensityReport, Graph, VertexSet};
pub use noise::{geometric_mechanism, sample_crossing_time, CrossingTime, GeomParam};
pub use oracles::{
    charikar_peel, exact_densest_bruteforce, randomized_response_densest,
    randomized_response_densest_noiseless, rr_flip_probability, BRUTE_FORCE_VERTEX_LIMIT,
};
pub use psum::NoisyPrefixSum;
