//! Detours through heavy path vertices, problematic-path stripping,
//! rewiring into an Eulerian core, and the top-level path pipeline.

mod detour;
mod problematic;
mod rewire;
mod solver;
mod trace;

use thiserror::Error;

pub use detour::{build_detour_set, reroute_avoiding, DetourSet};
pub use problematic::{strip_problematic, StripResult};
pub use rewire::{extract_k, realize_fake_edges, rewire, FakeEdge, RewireStep, RewiredGraph};
pub(crate) use solver::Solver;
pub use solver::{long_path_from, LongPathOutcome};
pub use trace::{Trace, TraceRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StitchError {
    #[error("graph is not Eulerian")]
    NotEulerian,
    #[error("graph is not connected")]
    NotConnected,
    #[error("vertex {0} is not in the graph")]
    MissingVertex(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no chord bypasses {0}")]
    MissingChord(usize),
    #[error("degree balance broken at {0}")]
    BalanceViolated(usize),
    #[error("{s} fake edges, at most {limit} allowed")]
    TooManyFakeEdges { s: usize, limit: String },
    #[error("no spaced detour vertex for fake edge {u}->{w}")]
    NoFeasibleDetour { u: usize, w: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}
