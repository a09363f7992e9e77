use alloc::vec::Vec;

use rand::Rng as _;

use super::{split_even, Executor, OperationLog};
use crate::didic::Change;
use crate::emulator::EmulatorHandle;
use crate::error::{Error, Result};
use crate::graph::{PartitionId, VertexId};
use crate::rng;

/// Number of read-slice/move-batch rounds when dynamism is interleaved.
pub const INTERLEAVE_BATCHES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DynamismPolicy {
    Random,
    FewestVertices,
    LeastTraffic,
}

impl DynamismPolicy {
    pub const ALL: [DynamismPolicy; 3] = [DynamismPolicy::Random, DynamismPolicy::FewestVertices, DynamismPolicy::LeastTraffic];

    pub fn as_str(self) -> &'static str {
        match self {
            DynamismPolicy::Random => "RANDOM",
            DynamismPolicy::FewestVertices => "FEWEST_VERTICES",
            DynamismPolicy::LeastTraffic => "LEAST_TRAFFIC",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamismSpec {
    pub policy: DynamismPolicy,
    /// Moved vertices as a fraction of `|V|`.
    pub level: f64,
    pub seed: u64,
    /// Replay the workload in slices between move batches.
    pub interleave_reads: bool,
}

impl DynamismSpec {
    pub fn new(policy: DynamismPolicy, level: f64, seed: u64) -> Self {
        DynamismSpec { policy, level, seed, interleave_reads: policy == DynamismPolicy::LeastTraffic }
    }

    /// `floor(level * n)`, tolerant of binary rounding in `level`.
    pub fn count(&self, num_vertices: usize) -> usize {
        libm::floor(self.level * num_vertices as f64 + 1e-9) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DynamismRecord {
    pub seq: u64,
    pub vertex: VertexId,
    pub target: PartitionId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamismLog {
    pub policy: DynamismPolicy,
    pub level: f64,
    pub seed: u64,
    pub records: Vec<DynamismRecord>,
}

impl DynamismLog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The moves as DiDiC change events.
    pub fn changes(records: &[DynamismRecord]) -> Vec<Change> {
        records.iter().map(|r| Change::Moved { vertex: r.vertex, target: r.target }).collect()
    }

    /// `n` contiguous record slices of near-equal length covering the log.
    pub fn slices(&self, n: usize) -> Vec<&[DynamismRecord]> {
        split_even(&self.records, n)
    }
}

fn argmin_by<F: Fn(&crate::emulator::InstanceInfo) -> u64>(h: &EmulatorHandle<'_>, key: F) -> PartitionId {
    h.snapshot_all().iter().min_by_key(|i| (key(i), i.pid)).map(|i| i.pid).unwrap_or(PartitionId(0))
}

/// Draws `floor(level * |V|)` distinct vertices and a target partition for
/// each, applying every move to `h` as it goes so that later choices see
/// earlier ones. With `interleave_reads`, the workload is replayed in
/// slices between move batches, which is what LEAST_TRAFFIC ranks by.
pub fn gen_dynamism(
    h: &mut EmulatorHandle<'_>,
    spec: &DynamismSpec,
    workload: Option<(&Executor, &OperationLog)>,
) -> Result<DynamismLog> {
    if !(spec.level >= 0.0 && spec.level <= 1.0) {
        return Err(Error::InvalidArgument(alloc::format!("dynamism level {} must lie in [0, 1]", spec.level)));
    }
    let interleave = spec.interleave_reads || spec.policy == DynamismPolicy::LeastTraffic;
    if interleave && workload.is_none() {
        return Err(Error::InvalidArgument(alloc::format!(
            "{} dynamism needs a read workload to interleave",
            spec.policy.as_str()
        )));
    }
    let n = h.graph().num_vertices();
    let count = spec.count(n);
    let k = h.k();
    let mut r = rng::seeded(spec.seed);
    let chosen: Vec<VertexId> = rand::seq::index::sample(&mut r, n, count).into_iter().map(VertexId).collect();

    let rounds = if interleave { INTERLEAVE_BATCHES } else { 1 };
    let op_slices = match workload {
        Some((_, log)) if interleave => log.slices(rounds),
        _ => Vec::new(),
    };
    let mut records = Vec::with_capacity(count);
    for (round, batch) in split_even(&chosen, rounds).into_iter().enumerate() {
        if let (Some((exec, _)), Some(ops)) = (workload, op_slices.get(round)) {
            exec.replay(h, ops)?;
        }
        for &vertex in batch {
            let target = match spec.policy {
                DynamismPolicy::Random => PartitionId(r.gen_range(0..k)),
                DynamismPolicy::FewestVertices => argmin_by(h, |i| i.num_vertices),
                DynamismPolicy::LeastTraffic => argmin_by(h, |i| i.total_traffic()),
            };
            h.move_vertices(&[vertex], target)?;
            records.push(DynamismRecord { seq: records.len() as u64, vertex, target });
        }
    }
    Ok(DynamismLog { policy: spec.policy, level: spec.level, seed: spec.seed, records })
}

/// Replays recorded moves onto `h`. The graph itself is never touched.
pub fn apply_dynamism(h: &mut EmulatorHandle<'_>, records: &[DynamismRecord]) -> Result<()> {
    for rec in records {
        h.move_vertices(&[rec.vertex], rec.target)?;
    }
    Ok(())
}
