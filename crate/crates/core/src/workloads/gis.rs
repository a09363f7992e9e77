use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::distributions::Distribution;
use rand::Rng as _;

use super::{weighted_sampler, OpPattern, OpTraffic, Operation, OperationLog, WorkloadSpec};
use crate::emulator::{Cursor, EmulatorHandle, Entity};
use crate::error::{Error, Result};
use crate::graph::{Direction, Graph, Scalar, VertexId, LATITUDE, LONGITUDE, WEIGHT};
use crate::rng;

/// Mean number of random-walk steps between start and end of a short route.
pub const SHORT_WALK_MEAN: f64 = 11.0;

/// How start vertices are weighted by their distance `d` (degrees) to the
/// nearest city center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GisStartWeighting {
    /// `1 / (1 + d)`: starts cluster in cities.
    InverseDistance,
    /// `d`: remote vertices are favored.
    Distance,
}

impl GisStartWeighting {
    pub fn as_str(self) -> &'static str {
        match self {
            GisStartWeighting::InverseDistance => "inverse",
            GisStartWeighting::Distance => "distance",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "inverse" => Some(GisStartWeighting::InverseDistance),
            "distance" => Some(GisStartWeighting::Distance),
            _ => None,
        }
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    libm::hypot(a.0 - b.0, a.1 - b.1)
}

/// Index of and distance to the closest of `centers`.
pub fn nearest_center(p: (f64, f64), centers: &[(f64, f64)]) -> Option<(usize, f64)> {
    centers.iter().enumerate().map(|(i, &c)| (i, dist(p, c))).min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
}

/// Walk length drawn from an exponential distribution with mean 11, rounded.
pub fn sample_walk_length(r: &mut rng::Rng) -> usize {
    libm::round(rng::exponential(r, SHORT_WALK_MEAN)) as usize
}

fn coordinates(g: &Graph) -> Result<Vec<(f64, f64)>> {
    g.vertices()
        .iter()
        .map(|v| {
            v.coordinates()
                .ok_or_else(|| Error::WrongDataset { expected: "gis", reason: alloc::format!("vertex {} has no coordinates", v.id) })
        })
        .collect()
}

/// Route searches. Starts are sampled by distance to the nearest city; a
/// short route ends where a random walk from the start stops, a long route
/// at a second independently sampled vertex.
pub fn gen_gis_ops(g: &Graph, spec: &WorkloadSpec) -> Result<OperationLog> {
    if !matches!(spec.pattern, OpPattern::GisAstarShort | OpPattern::GisAstarLong) {
        return Err(Error::InvalidArgument(alloc::format!("{} is not a GIS pattern", spec.pattern.as_str())));
    }
    if spec.cities.is_empty() {
        return Err(Error::InvalidArgument("GIS workload needs at least one city center".into()));
    }
    let coords = coordinates(g)?;
    let weights: Vec<f64> = coords
        .iter()
        .map(|&p| {
            let (_, d) = nearest_center(p, &spec.cities).unwrap();
            match spec.gis_start {
                GisStartWeighting::InverseDistance => 1.0 / (1.0 + d),
                GisStartWeighting::Distance => d,
            }
        })
        .collect();
    let sampler = weighted_sampler(&weights)?;
    let view = g.undirected_view();
    let mut r = rng::seeded(spec.seed);
    let mut ops = Vec::with_capacity(spec.num_ops);
    for seq in 0..spec.num_ops {
        let start = sampler.sample(&mut r);
        let end = if spec.pattern == OpPattern::GisAstarShort {
            let mut cur = start;
            for _ in 0..sample_walk_length(&mut r) {
                let nbrs = view.neighbor_ids(cur);
                if nbrs.is_empty() {
                    break;
                }
                cur = nbrs[r.gen_range(0..nbrs.len())];
            }
            cur
        } else {
            sampler.sample(&mut r)
        };
        ops.push(Operation { seq: seq as u64, pattern: spec.pattern, start: VertexId(start), end: Some(VertexId(end)) });
    }
    Ok(OperationLog { seed: Some(spec.seed), ops })
}

/// Straight-line heuristic scaled by the smallest cost per degree of any
/// edge, so it never overestimates the remaining route cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GisHeuristic {
    pub cost_per_degree: f64,
}

impl GisHeuristic {
    pub fn new(g: &Graph) -> Self {
        let mut best = f64::INFINITY;
        for e in g.edges() {
            let (Some(a), Some(b)) = (g.vertices()[e.start.0].coordinates(), g.vertices()[e.end.0].coordinates()) else {
                continue;
            };
            let len = dist(a, b);
            let w = e.properties.get(WEIGHT).and_then(Scalar::as_f64).unwrap_or(e.weight);
            if len > 0.0 {
                best = best.min(w / len);
            }
        }
        GisHeuristic { cost_per_degree: if best.is_finite() { best } else { 0.0 } }
    }

    fn estimate(&self, from: (f64, f64), to: (f64, f64)) -> f64 {
        self.cost_per_degree * dist(from, to)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Open {
    f: f64,
    v: usize,
}

impl Eq for Open {}

impl Ord for Open {
    // Reversed so the max-heap pops the smallest estimate, then lowest id.
    fn cmp(&self, other: &Self) -> Ordering {
        other.f.total_cmp(&self.f).then(other.v.cmp(&self.v))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn float_property(h: &mut EmulatorHandle<'_>, cursor: &mut Cursor, entity: Entity, key: &str) -> Result<f64> {
    let value = h.get_property(cursor, entity, key)?;
    value.as_f64().ok_or_else(|| Error::InvalidArgument(alloc::format!("property {key} is not numeric")))
}

/// A* shortest route by the WEIGHT property over roads in both directions.
/// Returns the route cost.
pub fn astar(
    h: &mut EmulatorHandle<'_>,
    cursor: &mut Cursor,
    heuristic: &GisHeuristic,
    start: VertexId,
    end: VertexId,
) -> Result<f64> {
    let target = h.lookup_vertex(cursor, end)?.coordinates();
    let origin = h.lookup_vertex(cursor, start)?.coordinates();
    if start == end {
        return Ok(0.0);
    }
    let (Some(target), Some(origin)) = (target, origin) else {
        return Err(Error::WrongDataset { expected: "gis", reason: "route endpoints have no coordinates".into() });
    };
    let n = h.graph().num_vertices();
    let mut cost = vec![f64::INFINITY; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    cost[start.0] = 0.0;
    open.push(Open { f: heuristic.estimate(origin, target), v: start.0 });
    while let Some(Open { v: u, .. }) = open.pop() {
        if closed[u] {
            continue;
        }
        closed[u] = true;
        if u == end.0 {
            return Ok(cost[u]);
        }
        let uid = VertexId(u);
        let mut edges = h.get_edges(uid, Direction::Both, None)?;
        loop {
            h.enter(cursor, uid)?;
            let Some(e) = h.next_edge(cursor, &mut edges) else { break };
            h.edge_id(cursor, e)?;
            let w = float_property(h, cursor, Entity::Edge(e), WEIGHT)?;
            let s = h.get_start_vertex(cursor, e)?;
            let t = h.get_end_vertex(cursor, e)?;
            h.vertex_id(cursor, s)?;
            h.vertex_id(cursor, t)?;
            let v = if s == uid { t } else { s };
            let lat = float_property(h, cursor, Entity::Vertex(v), LATITUDE)?;
            let lon = float_property(h, cursor, Entity::Vertex(v), LONGITUDE)?;
            let g = cost[u] + w;
            if !closed[v.0] && g < cost[v.0] {
                cost[v.0] = g;
                open.push(Open { f: g + heuristic.estimate((lon, lat), target), v: v.0 });
            }
        }
    }
    Err(Error::Unreachable { start, end })
}

pub fn exec_gis_op(h: &mut EmulatorHandle<'_>, heuristic: &GisHeuristic, op: &Operation) -> Result<OpTraffic> {
    let end = op.end.ok_or_else(|| Error::InvalidArgument(alloc::format!("operation {} has no end vertex", op.seq)))?;
    let mut cursor = Cursor::new();
    astar(h, &mut cursor, heuristic, op.start, end)?;
    Ok(OpTraffic::of(&cursor))
}
