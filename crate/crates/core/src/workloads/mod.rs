//! Read workloads over the emulator and partition-move dynamism.
//!
//! Each access pattern has a generator producing an [`OperationLog`] and an
//! executor replaying one operation against an [`EmulatorHandle`]. Per
//! traversed edge the patterns issue these actions, of which only the edge
//! retrieval can be global:
//!
//! | pattern | local | potentially global |
//! |---------|-------|--------------------|
//! | FS BFS  | 2     | 1                  |
//! | GIS A*  | 8     | 1                  |
//! | FOAF    | 2     | 1                  |

mod dynamism;
mod fs;
mod gis;
mod social;

pub use dynamism::{apply_dynamism, gen_dynamism, DynamismLog, DynamismPolicy, DynamismRecord, DynamismSpec};
pub use fs::{exec_fs_op, fs_bfs, gen_fs_ops};
pub use gis::{astar, exec_gis_op, gen_gis_ops, nearest_center, sample_walk_length, GisHeuristic, GisStartWeighting};
pub use social::{exec_social_op, foaf, gen_social_ops};

use alloc::vec::Vec;

use crate::datasets::DEFAULT_CITIES;
use crate::emulator::{Cursor, EmulatorHandle};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpPattern {
    FsBfs,
    GisAstarShort,
    GisAstarLong,
    SocialFoaf,
}

impl OpPattern {
    pub const ALL: [OpPattern; 4] = [OpPattern::FsBfs, OpPattern::GisAstarShort, OpPattern::GisAstarLong, OpPattern::SocialFoaf];

    pub fn as_str(self) -> &'static str {
        match self {
            OpPattern::FsBfs => "FS_BFS",
            OpPattern::GisAstarShort => "GIS_ASTAR_SHORT",
            OpPattern::GisAstarLong => "GIS_ASTAR_LONG",
            OpPattern::SocialFoaf => "SOCIAL_FOAF",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str().eq_ignore_ascii_case(s))
    }

    /// Local and potentially-global actions issued per traversed edge.
    pub fn actions_per_step(self) -> (u32, u32) {
        match self {
            OpPattern::FsBfs | OpPattern::SocialFoaf => (2, 1),
            OpPattern::GisAstarShort | OpPattern::GisAstarLong => (8, 1),
        }
    }

    /// Whether the pattern needs an end vertex.
    pub fn has_end(self) -> bool {
        !matches!(self, OpPattern::SocialFoaf)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Operation {
    pub seq: u64,
    pub pattern: OpPattern,
    pub start: VertexId,
    pub end: Option<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperationLog {
    /// Seed the log was generated from, if known.
    pub seed: Option<u64>,
    pub ops: Vec<Operation>,
}

impl OperationLog {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Pattern shared by all operations, if there is exactly one.
    pub fn pattern(&self) -> Option<OpPattern> {
        let first = self.ops.first()?.pattern;
        self.ops.iter().all(|o| o.pattern == first).then_some(first)
    }

    /// Splits the operations into `n` contiguous slices of near-equal length.
    pub fn slices(&self, n: usize) -> Vec<&[Operation]> {
        split_even(&self.ops, n)
    }
}

pub(crate) fn split_even<T>(items: &[T], n: usize) -> Vec<&[T]> {
    let n = n.max(1);
    let mut out = Vec::with_capacity(n);
    let mut at = 0;
    for i in 0..n {
        let len = items.len() / n + usize::from(i < items.len() % n);
        out.push(&items[at..at + len]);
        at += len;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub pattern: OpPattern,
    pub num_ops: usize,
    pub seed: u64,
    /// City centers for GIS start sampling, `(longitude, latitude)`.
    pub cities: Vec<(f64, f64)>,
    pub gis_start: GisStartWeighting,
}

impl WorkloadSpec {
    pub fn new(pattern: OpPattern, num_ops: usize, seed: u64) -> Self {
        WorkloadSpec { pattern, num_ops, seed, cities: DEFAULT_CITIES.to_vec(), gis_start: GisStartWeighting::InverseDistance }
    }
}

/// Generates a log for `spec.pattern`.
pub fn gen_ops(g: &Graph, spec: &WorkloadSpec) -> Result<OperationLog> {
    match spec.pattern {
        OpPattern::FsBfs => gen_fs_ops(g, spec),
        OpPattern::GisAstarShort | OpPattern::GisAstarLong => gen_gis_ops(g, spec),
        OpPattern::SocialFoaf => gen_social_ops(g, spec),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpTraffic {
    pub local: u64,
    pub global: u64,
}

impl OpTraffic {
    pub fn total(&self) -> u64 {
        self.local + self.global
    }

    fn of(cursor: &Cursor) -> Self {
        OpTraffic { local: cursor.op_local(), global: cursor.op_global() }
    }
}

/// Replays operations of any pattern, caching per-graph lookup tables.
#[derive(Debug, Clone)]
pub struct Executor {
    gis: Option<GisHeuristic>,
}

impl Executor {
    pub fn new(g: &Graph) -> Self {
        let gis = g.vertices().first().and_then(|v| v.coordinates()).map(|_| GisHeuristic::new(g));
        Executor { gis }
    }

    pub fn execute(&self, h: &mut EmulatorHandle<'_>, op: &Operation) -> Result<OpTraffic> {
        match op.pattern {
            OpPattern::FsBfs => exec_fs_op(h, op),
            OpPattern::SocialFoaf => exec_social_op(h, op),
            OpPattern::GisAstarShort | OpPattern::GisAstarLong => {
                let heuristic = self.gis.as_ref().ok_or(Error::WrongDataset {
                    expected: "gis",
                    reason: "vertices carry no coordinates".into(),
                })?;
                exec_gis_op(h, heuristic, op)
            }
        }
    }

    pub fn replay(&self, h: &mut EmulatorHandle<'_>, ops: &[Operation]) -> Result<Vec<OpTraffic>> {
        ops.iter().map(|op| self.execute(h, op)).collect()
    }
}

/// Vertices with probability proportional to `weight`; errors if all are zero.
pub(crate) fn weighted_sampler(weights: &[f64]) -> Result<rand::distributions::WeightedIndex<f64>> {
    rand::distributions::WeightedIndex::new(weights)
        .map_err(|e| Error::InvalidArgument(alloc::format!("cannot sample start vertices: {e}")))
}
