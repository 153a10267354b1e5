//! Digraph representation, validity checks, reachability and SCCs.

mod digraph;
pub mod io;
mod path;
mod scc;

pub(crate) use digraph::mask_of;
pub use digraph::{build_digraph, Digraph, GraphError};
pub(crate) use path::bfs_to_mask;
pub use path::{check_path, greedy_longest_path, path_to_set, BranchTag, PathWitness};
pub use scc::{is_strongly_connected, is_weakly_connected, sccs, weak_components, SccPartition};
