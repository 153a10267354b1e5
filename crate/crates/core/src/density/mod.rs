//! The path bound, dense Eulerian subgraphs, layered peeling and the
//! separator dichotomy.

mod bound;
mod dfull;
mod dichotomy;
mod layered;

use thiserror::Error;

pub use bound::{check_phi_inequality, phi, BoundParams, Thresholds, PHI_GUARD};
pub use dfull::{extract_d_full, find_dense_eulerian_subgraph, is_dense};
pub use dichotomy::{connectivity_or_longpath, Dichotomy, DichotomyOutcome};
pub use layered::{layered_peel_path, LayeredPeel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("d must be positive, got {0}")]
    NonpositiveD(f64),
    #[error("invalid parameters c = {c}, eps = {eps}")]
    InvalidParams { c: f64, eps: f64 },
    #[error("lambda = {lambda} outside [0, {max}]")]
    LambdaOutOfRange { lambda: f64, max: f64 },
    #[error("graph is not Eulerian")]
    NotEulerian,
    #[error("{edges} edges on {vertices} vertices is below (n - 1) * {d}")]
    DensityTooLow { edges: usize, vertices: usize, d: f64 },
    #[error("target set is empty")]
    EmptyB,
    #[error("target set unreachable")]
    Unreachable,
    #[error("separator of size {size} exceeds {max}")]
    SizeOfS { size: usize, max: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("graph is not d-full: {0}")]
    NotDFull(String),
}
