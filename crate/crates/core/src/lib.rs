//! Parallel kernelization for the maximum independent set problem.
//!
//! The pipeline removes degree-0/1 vertices and degree-two paths, partitions
//! the remaining graph, and then alternates blockwise local reductions with a
//! matching-based LP reduction. The resulting (quasi) kernel plus the
//! reduction log lift any maximum independent set of the kernel back to one of
//! the input graph.

pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod kernelizer;
pub mod lp;
pub mod oracle;
pub mod partition;
pub mod reductions;
pub mod restore;
pub mod stats;

pub use error::{KernelError, Result};
pub use graph::{Graph, VertexId};
pub use kernelizer::{kernelize, sequential_kernelize, KernelResult, KernelizerConfig, Mode};
