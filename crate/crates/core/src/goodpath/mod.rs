//! Random initial segments and the checks on their chord structure.

mod grow;
mod verify;

use thiserror::Error;

pub use grow::{find_good_path, grow_random_path, try_grow};
pub(crate) use verify::chord_for;
pub use verify::{bad_pairs, dangerous_vertices, heavy_vertices, verify_good_path, GoodPathReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoodPathError {
    #[error("random walk stuck after {} steps", walk.len() - 1)]
    DeadEnd { walk: Vec<usize> },
    #[error("no path of length {p} found in {tries} tries")]
    TargetUnreachable { p: usize, tries: usize },
    #[error("not a valid path in the graph")]
    InvalidPath,
}
