use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use rand::distributions::Distribution;
use rand::Rng as _;

use super::{weighted_sampler, OpPattern, OpTraffic, Operation, OperationLog, WorkloadSpec};
use crate::emulator::{Cursor, EmulatorHandle};
use crate::error::{Error, Result};
use crate::graph::{Direction, EdgeLabel, Graph, VertexId, VertexKind};
use crate::partitioners::tree_parents;
use crate::rng;

/// Search operations: the end is a file or folder picked by degree, the
/// start an ancestor folder at a uniformly chosen level between the end and
/// its user's root folder.
pub fn gen_fs_ops(g: &Graph, spec: &WorkloadSpec) -> Result<OperationLog> {
    let is_entry = |k: VertexKind| matches!(k, VertexKind::File | VertexKind::Folder);
    let weights: Vec<f64> = g
        .vertices()
        .iter()
        .map(|v| if is_entry(v.kind) { (g.out_degree_count(v.id) + g.in_degree_count(v.id)) as f64 } else { 0.0 })
        .collect();
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::WrongDataset { expected: "fs", reason: "no file or folder vertices".into() });
    }
    let sampler = weighted_sampler(&weights)?;
    let parents = tree_parents(g);
    let mut r = rng::seeded(spec.seed);
    let mut path = Vec::new();
    let mut ops = Vec::with_capacity(spec.num_ops);
    for seq in 0..spec.num_ops {
        let end = VertexId(sampler.sample(&mut r));
        path.clear();
        let mut cur = end;
        path.push(cur);
        while let Some(p) = parents[cur.0] {
            if !is_entry(g.vertices()[p.0].kind) {
                break;
            }
            path.push(p);
            cur = p;
        }
        let start = path[r.gen_range(0..path.len())];
        ops.push(Operation { seq: seq as u64, pattern: OpPattern::FsBfs, start, end: Some(end) });
    }
    Ok(OperationLog { seed: Some(spec.seed), ops })
}

/// Breadth-first search along CHILD edges from `start` until `end` is
/// read. Returns the number of edges traversed.
pub fn fs_bfs(h: &mut EmulatorHandle<'_>, cursor: &mut Cursor, start: VertexId, end: VertexId) -> Result<usize> {
    h.lookup_vertex(cursor, start)?;
    if start == end {
        return Ok(0);
    }
    let mut steps = 0;
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let mut edges = h.get_edges(u, Direction::Out, Some(EdgeLabel::Child))?;
        loop {
            h.enter(cursor, u)?;
            let Some(e) = h.next_edge(cursor, &mut edges) else { break };
            let v = h.get_end_vertex(cursor, e)?;
            h.vertex_id(cursor, v)?;
            steps += 1;
            if v == end {
                return Ok(steps);
            }
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    Err(Error::Unreachable { start, end })
}

pub fn exec_fs_op(h: &mut EmulatorHandle<'_>, op: &Operation) -> Result<OpTraffic> {
    let end = op.end.ok_or_else(|| Error::InvalidArgument(alloc::format!("operation {} has no end vertex", op.seq)))?;
    let mut cursor = Cursor::new();
    fs_bfs(h, &mut cursor, op.start, end)?;
    Ok(OpTraffic::of(&cursor))
}
