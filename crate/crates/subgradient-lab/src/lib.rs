//! A simulation laboratory for centralized and distributed projected
//! subgradient methods.
//!
//! The crate builds consensus graphs and their doubly stochastic mixing
//! matrices, runs projected subgradient iterations (centralized and three
//! distributed variants), and drives the experiments that expose when the
//! distributed method is asymptotically network independent (step sizes
//! `1/t^beta` with `beta > 1/2`) and when it is not (`beta = 1/2`, via an
//! exactly verifiable adversarial construction on the two-cliques graph).
//!
//! Start with the runnable examples:
//!
//! ```text
//! cargo run --example spectrum
//! cargo run --example counterexample_trajectory
//! cargo run --example network_independence
//! cargo run --example step_size_inversion
//! cargo run --example centralized_bound
//! cargo run --example schedule_constants
//! cargo run --example custom_run
//! ```
//!
//! The same capabilities are reachable through the thin `sublab` binary
//! (`spectrum`, `run`, `counterexample`, `fig-independence`,
//! `fig-inversion`, `verify` subcommands).

pub mod cli;
pub mod counterexample;
pub mod experiments;
pub mod graph;
pub mod plot;
pub mod problem;
pub mod schedule;
pub mod solver;
pub mod verify;

pub use graph::{Graph, MixingMatrix, Topology};
pub use problem::{ConstraintSet, LocalFunction, ProblemInstance, TieRule};
pub use schedule::{ScheduleConstants, StepSchedule};
pub use solver::{RunRecord, SolverState, Termination, Variant};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported schedule: {0}")]
    UnsupportedSchedule(String),
    #[error("invalid adversary at t={t}: |g_u| = {g_u:.6} exceeds gamma = {gamma}")]
    InvalidAdversary { t: u64, g_u: f64, gamma: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
