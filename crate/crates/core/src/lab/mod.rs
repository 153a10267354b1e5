//! Generators with known ground truth, exact oracles for tiny graphs, the
//! experiment harness and the invariant checks behind `verify`.

mod experiment;
mod generators;
mod oracle;
mod plot;
mod verify;

use thiserror::Error;

pub use experiment::{run_experiment, to_csv, ExperimentConfig, ExperimentRecord, CSV_HEADER};
pub use generators::{generate, GeneratorSpec};
pub use oracle::{
    oracle_longest_cycle, oracle_longest_path_from, oracle_max_density_eulerian_subgraph, DEFAULT_CYCLE_CAP,
    DEFAULT_ORACLE_CAP,
};
pub use plot::{plot_csv, PlotPoint};
pub use verify::{verify_graph, Check, VerifyReport};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("plot error: {0}")]
    Plot(String),
}
