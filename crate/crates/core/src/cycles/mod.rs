//! Cycle decompositions, Eulerian-preserving cycle removal, degree peeling
//! and the long-cycle construction for graphs of bounded maximum degree.

mod decompose;
mod long_cycle;
mod sieve;

use thiserror::Error;

pub use decompose::{cycle_edges, decompose_into_cycles, remove_cycles_through, CycleDecomposition};
pub use long_cycle::{long_cycle_bounded_degree, CycleCase, LongCycle, LongCycleParams};
pub use sieve::{min_outdegree_cycle, peel_low_degree, short_cycle_sieve, SieveResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("graph is not Eulerian")]
    NotEulerian,
    #[error("cycle collection does not partition the edge set")]
    DecompositionMismatch,
    #[error("vertex {0} has no out-edge")]
    NoOutEdge(usize),
    #[error("graph has no edges")]
    NoEdges,
    #[error("partition resampling budget exhausted")]
    ResampleBudgetExhausted,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}
