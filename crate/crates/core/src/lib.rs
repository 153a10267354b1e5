//! Long directed paths from any vertex of a connected Eulerian digraph.
//!
//! The crate implements the constructive steps behind the
//! `c * d^(1/2 + 1/40)` path bound for Eulerian digraphs of average degree
//! `d`: d-full subgraph extraction, cycle decompositions and peeling,
//! the separator dichotomies, the randomized initial segment with its
//! chord structure, and the rewiring machinery that turns the remainder
//! into an Eulerian core. Around it sit exact brute-force oracles,
//! generators with known ground truth and an experiment harness.
//!
//! Every procedure is total: when a guarantee is vacuous at the given
//! scale the pipeline still returns a valid path and reports whether the
//! bound was certified.

pub mod config;
pub mod cycles;
pub mod density;
pub mod goodpath;
pub mod graph;
pub mod lab;
pub mod stitch;

pub use config::PipelineConfig;
pub use graph::{check_path, Digraph, PathWitness};
pub use stitch::{long_path_from, LongPathOutcome};
