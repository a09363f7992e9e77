use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::distributions::Distribution;

use super::{weighted_sampler, OpPattern, OpTraffic, Operation, OperationLog, WorkloadSpec};
use crate::emulator::{Cursor, EmulatorHandle};
use crate::error::{Error, Result};
use crate::graph::{Direction, Graph, VertexId};
use crate::rng;

/// Friend-of-a-friend reads starting at users picked by out-degree.
pub fn gen_social_ops(g: &Graph, spec: &WorkloadSpec) -> Result<OperationLog> {
    let weights: Vec<f64> = g.vertex_ids().map(|v| g.out_degree_count(v) as f64).collect();
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::WrongDataset { expected: "social", reason: "no vertex has outgoing edges".into() });
    }
    let sampler = weighted_sampler(&weights)?;
    let mut r = rng::seeded(spec.seed);
    let ops = (0..spec.num_ops)
        .map(|seq| Operation { seq: seq as u64, pattern: OpPattern::SocialFoaf, start: VertexId(sampler.sample(&mut r)), end: None })
        .collect();
    Ok(OperationLog { seed: Some(spec.seed), ops })
}

/// Users reachable from `start` within two outgoing hops, in discovery order.
pub fn foaf(h: &mut EmulatorHandle<'_>, cursor: &mut Cursor, start: VertexId) -> Result<Vec<VertexId>> {
    h.lookup_vertex(cursor, start)?;
    let mut seen = BTreeSet::from([start]);
    let mut found = Vec::new();
    let mut frontier = alloc::vec![start];
    for _ in 0..2 {
        let mut next = Vec::new();
        for &u in &frontier {
            let mut edges = h.get_edges(u, Direction::Out, None)?;
            loop {
                h.enter(cursor, u)?;
                let Some(e) = h.next_edge(cursor, &mut edges) else { break };
                let v = h.get_end_vertex(cursor, e)?;
                h.vertex_id(cursor, v)?;
                if seen.insert(v) {
                    found.push(v);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    Ok(found)
}

pub fn exec_social_op(h: &mut EmulatorHandle<'_>, op: &Operation) -> Result<OpTraffic> {
    let mut cursor = Cursor::new();
    foaf(h, &mut cursor, op.start)?;
    Ok(OpTraffic::of(&cursor))
}
