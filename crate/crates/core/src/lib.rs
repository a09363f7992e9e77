//! Graph partitioning toolkit: disturbed-diffusion partitioning (DiDiC),
//! partition-quality metrics, baseline partitioners, synthetic dataset
//! generators, and a logically partitioned graph-database emulator that
//! accounts local and cross-partition traffic.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, experiment
//! drivers and the command line live in the `diffpart` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod datasets;
pub mod didic;
mod error;
pub mod emulator;
pub mod graph;
pub mod metrics;
pub mod partitioners;
pub mod rng;
pub mod workloads;

pub use error::{Error, Result};
pub use graph::{
    Direction, Edge, EdgeId, EdgeLabel, Graph, PartitionId, PartitionMap, Scalar, UndirectedView,
    Vertex, VertexId, VertexKind,
};
