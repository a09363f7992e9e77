//! In-memory directed weighted graph with typed, property-carrying vertices,
//! partition assignments and an undirected analysis view.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub const LATITUDE: &str = "latitude";
pub const LONGITUDE: &str = "longitude";
pub const WEIGHT: &str = "WEIGHT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PartitionId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl PartitionId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for PartitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "π{}", self.0)
    }
}

/// Property value attached to a vertex or edge.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Scalar {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Scalar::Int(i) => Some(i as f64),
            Scalar::Float(x) => Some(x),
            Scalar::Text(_) => None,
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<i64> for Scalar {
    fn from(i: i64) -> Self {
        Scalar::Int(i)
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::Text(s.to_string())
    }
}

pub type Properties = BTreeMap<String, Scalar>;

/// Domain tag of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum VertexKind {
    #[default]
    Generic,
    Organization,
    User,
    Folder,
    File,
    Event,
    GisPoint,
    SocialUser,
}

impl VertexKind {
    pub const ALL: [VertexKind; 8] = [
        VertexKind::Generic,
        VertexKind::Organization,
        VertexKind::User,
        VertexKind::Folder,
        VertexKind::File,
        VertexKind::Event,
        VertexKind::GisPoint,
        VertexKind::SocialUser,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Generic => "GENERIC",
            VertexKind::Organization => "ORG",
            VertexKind::User => "USER",
            VertexKind::Folder => "FOLDER",
            VertexKind::File => "FILE",
            VertexKind::Event => "EVENT",
            VertexKind::GisPoint => "GIS_POINT",
            VertexKind::SocialUser => "SOCIAL_USER",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

/// Relationship type of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum EdgeLabel {
    #[default]
    Plain,
    /// Organization to member user.
    Member,
    /// User to root folder, or folder to child folder/file.
    Child,
    /// File or folder to the event recording its creation.
    Created,
    /// Event to its actor or target.
    Subject,
    Road,
    Follows,
}

impl EdgeLabel {
    pub const ALL: [EdgeLabel; 7] = [
        EdgeLabel::Plain,
        EdgeLabel::Member,
        EdgeLabel::Child,
        EdgeLabel::Created,
        EdgeLabel::Subject,
        EdgeLabel::Road,
        EdgeLabel::Follows,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::Plain => "PLAIN",
            EdgeLabel::Member => "MEMBER",
            EdgeLabel::Child => "CHILD",
            EdgeLabel::Created => "CREATED",
            EdgeLabel::Subject => "SUBJECT",
            EdgeLabel::Road => "ROAD",
            EdgeLabel::Follows => "FOLLOWS",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: VertexId,
    pub kind: VertexKind,
    pub properties: Properties,
}

impl Vertex {
    pub fn property(&self, key: &str) -> Option<&Scalar> {
        self.properties.get(key)
    }

    /// `(longitude, latitude)` when both coordinates are present and numeric.
    pub fn coordinates(&self) -> Option<(f64, f64)> {
        let lon = self.property(LONGITUDE)?.as_f64()?;
        let lat = self.property(LATITUDE)?.as_f64()?;
        Some((lon, lat))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub start: VertexId,
    pub end: VertexId,
    pub weight: f64,
    pub label: EdgeLabel,
    pub properties: Properties,
}

impl Edge {
    /// The endpoint opposite `v`. For self-loops this is `v` itself.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.start == v {
            self.end
        } else {
            self.start
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
    Both,
}

/// Directed multigraph with dense vertex and edge ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize, kind: VertexKind) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex(kind);
        }
        g
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> VertexId {
        let id = VertexId(self.vertices.len());
        self.vertices.push(Vertex { id, kind, properties: Properties::new() });
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        id
    }

    /// Adds a vertex carrying `properties`. GIS points must carry both
    /// coordinates.
    pub fn add_vertex_with(&mut self, kind: VertexKind, properties: Properties) -> Result<VertexId> {
        if kind == VertexKind::GisPoint {
            for key in [LATITUDE, LONGITUDE] {
                if properties.get(key).and_then(Scalar::as_f64).is_none() {
                    return Err(Error::MissingProperty {
                        entity: format!("new {} vertex", kind.as_str()),
                        key: key.to_string(),
                    });
                }
            }
        }
        let id = self.add_vertex(kind);
        self.vertices[id.0].properties = properties;
        Ok(id)
    }

    pub fn add_edge(&mut self, start: VertexId, end: VertexId, weight: f64, label: EdgeLabel) -> Result<EdgeId> {
        self.check_vertex(start)?;
        self.check_vertex(end)?;
        if !(weight > 0.0 && weight <= 1.0) {
            return Err(Error::InvalidWeight(weight));
        }
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge { id, start, end, weight, label, properties: Properties::new() });
        self.out_adj[start.0].push(id);
        self.in_adj[end.0].push(id);
        Ok(id)
    }

    pub fn set_vertex_property(&mut self, v: VertexId, key: &str, value: Scalar) -> Result<()> {
        self.check_vertex(v)?;
        self.vertices[v.0].properties.insert(key.to_string(), value);
        Ok(())
    }

    pub fn set_edge_property(&mut self, e: EdgeId, key: &str, value: Scalar) -> Result<()> {
        let edge = self.edges.get_mut(e.0).ok_or(Error::UnknownEdge(e))?;
        edge.properties.insert(key.to_string(), value);
        Ok(())
    }

    #[inline]
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.0 < self.vertices.len()
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn vertex(&self, v: VertexId) -> Result<&Vertex> {
        self.vertices.get(v.0).ok_or(Error::UnknownVertex(v))
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(e.0).ok_or(Error::UnknownEdge(e))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn out_edges(&self, v: VertexId) -> Result<&[EdgeId]> {
        self.out_adj.get(v.0).map(Vec::as_slice).ok_or(Error::UnknownVertex(v))
    }

    pub fn in_edges(&self, v: VertexId) -> Result<&[EdgeId]> {
        self.in_adj.get(v.0).map(Vec::as_slice).ok_or(Error::UnknownVertex(v))
    }

    /// Incident edges of `v` in `direction`; `Both` lists out-edges first.
    pub fn incident_edges(&self, v: VertexId, direction: Direction) -> Result<Vec<EdgeId>> {
        Ok(match direction {
            Direction::Out => self.out_edges(v)?.to_vec(),
            Direction::In => self.in_edges(v)?.to_vec(),
            Direction::Both => {
                let mut all = self.out_edges(v)?.to_vec();
                all.extend_from_slice(self.in_edges(v)?);
                all
            }
        })
    }

    pub fn out_degree_count(&self, v: VertexId) -> usize {
        self.out_adj.get(v.0).map_or(0, Vec::len)
    }

    pub fn in_degree_count(&self, v: VertexId) -> usize {
        self.in_adj.get(v.0).map_or(0, Vec::len)
    }

    /// Weighted degree of `v`: the sum of incident edge weights per `view`.
    pub fn degree(&self, v: VertexId, view: Direction) -> Result<f64> {
        let sum = |ids: &[EdgeId]| ids.iter().map(|e| self.edges[e.0].weight).sum::<f64>();
        Ok(match view {
            Direction::Out => sum(self.out_edges(v)?),
            Direction::In => sum(self.in_edges(v)?),
            Direction::Both => sum(self.out_edges(v)?) + sum(self.in_edges(v)?),
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// FNV-1a digest over the structure (vertex kinds, edge endpoints,
    /// weights and labels). Properties are not included.
    pub fn structure_hash(&self) -> u64 {
        let mut h = Fnv::new();
        h.write_u64(self.vertices.len() as u64);
        for v in &self.vertices {
            h.write_u64(v.kind as u64);
        }
        h.write_u64(self.edges.len() as u64);
        for e in &self.edges {
            h.write_u64(e.start.0 as u64);
            h.write_u64(e.end.0 as u64);
            h.write_u64(e.weight.to_bits());
            h.write_u64(e.label as u64);
        }
        h.finish()
    }

    pub fn undirected_view(&self) -> UndirectedView {
        UndirectedView::from_graph(self)
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write_u64(&mut self, x: u64) {
        for b in x.to_le_bytes() {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

/// Total assignment of vertices to `k` partitions. Edges live on the
/// partition of their start vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionMap {
    k: u32,
    assignment: Vec<u32>,
}

impl PartitionMap {
    pub fn new(k: u32, assignment: Vec<u32>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("partition count k must be at least 1".into()));
        }
        if let Some(&pid) = assignment.iter().find(|&&p| p >= k) {
            return Err(Error::PartitionOutOfRange { pid: PartitionId(pid), k });
        }
        Ok(PartitionMap { k, assignment })
    }

    /// Every vertex on partition 0.
    pub fn single(num_vertices: usize, k: u32) -> Result<Self> {
        Self::new(k, vec![0; num_vertices])
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> PartitionId {
        PartitionId(self.assignment[v.0])
    }

    pub fn try_get(&self, v: VertexId) -> Result<PartitionId> {
        self.assignment.get(v.0).map(|&p| PartitionId(p)).ok_or(Error::UnknownVertex(v))
    }

    pub fn set(&mut self, v: VertexId, pid: PartitionId) -> Result<()> {
        if pid.0 >= self.k {
            return Err(Error::PartitionOutOfRange { pid, k: self.k });
        }
        let slot = self.assignment.get_mut(v.0).ok_or(Error::UnknownVertex(v))?;
        *slot = pid.0;
        Ok(())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.assignment
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.assignment
    }

    /// Vertex count per partition, indexed by partition id.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k as usize];
        for &p in &self.assignment {
            sizes[p as usize] += 1;
        }
        sizes
    }

    pub fn members(&self, pid: PartitionId) -> impl Iterator<Item = VertexId> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, &p)| p == pid.0)
            .map(|(i, _)| VertexId(i))
    }

    pub fn check_covers(&self, num_vertices: usize) -> Result<()> {
        if self.assignment.len() != num_vertices {
            return Err(Error::DimensionMismatch(format!(
                "partition map covers {} vertices, graph has {}",
                self.assignment.len(),
                num_vertices
            )));
        }
        Ok(())
    }
}

/// True iff the endpoints of `e` lie on different partitions.
pub fn is_inter_edge(g: &Graph, p: &PartitionMap, e: EdgeId) -> Result<bool> {
    let edge = g.edge(e)?;
    Ok(p.try_get(edge.start)? != p.try_get(edge.end)?)
}

/// Symmetric weighted adjacency in CSR form. Parallel and anti-parallel
/// edges between one vertex pair merge by summing their weights, capped at
/// 1.0. Self-loops are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct UndirectedView {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    total_weight: f64,
    num_edges: usize,
}

impl UndirectedView {
    pub fn from_graph(g: &Graph) -> Self {
        let pairs = g.edges().iter().map(|e| (e.start.0, e.end.0, e.weight));
        Self::from_weighted_pairs(g.num_vertices(), pairs)
    }

    /// Builds the view from `(u, v, weight)` triples over `n` vertices.
    pub fn from_weighted_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in pairs {
            if u == v {
                continue;
            }
            let key = if u < v { (u, v) } else { (v, u) };
            *merged.entry(key).or_insert(0.0) += w;
        }
        let mut counts = vec![0usize; n + 1];
        for &(u, v) in merged.keys() {
            counts[u + 1] += 1;
            counts[v + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; 2 * merged.len()];
        let mut weights = vec![0.0f64; 2 * merged.len()];
        let mut total_weight = 0.0;
        let mut pairs: Vec<(usize, usize, f64)> = Vec::with_capacity(merged.len());
        for (&(u, v), &w) in &merged {
            let w = w.min(1.0);
            total_weight += w;
            pairs.push((u, v, w));
        }
        // Rows stay sorted by neighbor id: every row first receives its smaller
        // neighbors (ordered by (v, u)), then its larger ones (ordered by (u, v)).
        let mut by_larger = pairs.clone();
        by_larger.sort_by_key(|&(u, v, _)| (v, u));
        for &(u, v, w) in &by_larger {
            let slot = fill[v];
            targets[slot] = u;
            weights[slot] = w;
            fill[v] += 1;
        }
        for &(u, v, w) in &pairs {
            let slot = fill[u];
            targets[slot] = v;
            weights[slot] = w;
            fill[u] += 1;
        }
        let num_edges = merged.len();
        UndirectedView { offsets, targets, weights, total_weight, num_edges }
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of distinct unordered vertex pairs joined by an edge.
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Sum of merged pair weights, each pair counted once.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Neighbor ids and merged weights of `v`, sorted by neighbor id.
    #[inline]
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()].iter().copied().zip(self.weights[range].iter().copied())
    }

    #[inline]
    pub fn neighbor_ids(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree_count(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.weights[self.offsets[v]..self.offsets[v + 1]].iter().sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbor_ids(u).binary_search(&v).is_ok()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let ids = self.neighbor_ids(u);
        ids.binary_search(&v).ok().map(|i| self.weights[self.offsets[u] + i])
    }

    /// Each undirected pair once, as `(u, v, weight)` with `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_vertices()).flat_map(move |u| {
            self.neighbors(u).filter(move |&(v, _)| u < v).map(move |(v, w)| (u, v, w))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        let mut g = Graph::with_vertices(3, VertexKind::Generic);
        g.add_edge(VertexId(0), VertexId(1), 1.0, EdgeLabel::Plain).unwrap();
        g.add_edge(VertexId(1), VertexId(2), 1.0, EdgeLabel::Plain).unwrap();
        g.add_edge(VertexId(2), VertexId(0), 1.0, EdgeLabel::Plain).unwrap();
        g
    }

    #[test]
    fn degree_examples() {
        let mut g = Graph::with_vertices(1, VertexKind::Generic);
        assert_eq!(g.degree(VertexId(0), Direction::Both).unwrap(), 0.0);
        assert!(matches!(g.degree(VertexId(3), Direction::Both), Err(Error::UnknownVertex(_))));

        let t = triangle();
        for v in t.vertex_ids() {
            assert_eq!(t.degree(v, Direction::Both).unwrap(), 2.0);
        }

        g = Graph::with_vertices(4, VertexKind::Generic);
        for leaf in 1..4 {
            g.add_edge(VertexId(0), VertexId(leaf), 0.5, EdgeLabel::Plain).unwrap();
        }
        assert_eq!(g.degree(VertexId(0), Direction::Out).unwrap(), 1.5);
        assert_eq!(g.degree(VertexId(0), Direction::In).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_weights_and_endpoints() {
        let mut g = Graph::with_vertices(2, VertexKind::Generic);
        assert!(matches!(g.add_edge(VertexId(0), VertexId(1), 0.0, EdgeLabel::Plain), Err(Error::InvalidWeight(_))));
        assert!(matches!(g.add_edge(VertexId(0), VertexId(1), 1.5, EdgeLabel::Plain), Err(Error::InvalidWeight(_))));
        assert!(matches!(g.add_edge(VertexId(0), VertexId(9), 1.0, EdgeLabel::Plain), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn gis_vertices_need_coordinates() {
        let mut g = Graph::new();
        let mut props = Properties::new();
        props.insert(LATITUDE.into(), Scalar::Float(44.0));
        assert!(g.add_vertex_with(VertexKind::GisPoint, props.clone()).is_err());
        props.insert(LONGITUDE.into(), Scalar::Float(26.0));
        let v = g.add_vertex_with(VertexKind::GisPoint, props).unwrap();
        assert_eq!(g.vertex(v).unwrap().coordinates(), Some((26.0, 44.0)));
    }

    #[test]
    fn inter_edge_examples() {
        let mut g = Graph::with_vertices(3, VertexKind::Generic);
        let ab = g.add_edge(VertexId(0), VertexId(1), 1.0, EdgeLabel::Plain).unwrap();
        let bc = g.add_edge(VertexId(1), VertexId(2), 1.0, EdgeLabel::Plain).unwrap();
        let single = PartitionMap::single(3, 1).unwrap();
        assert!(!is_inter_edge(&g, &single, ab).unwrap());
        assert!(!is_inter_edge(&g, &single, bc).unwrap());
        let split = PartitionMap::new(2, vec![0, 0, 1]).unwrap();
        assert!(!is_inter_edge(&g, &split, ab).unwrap());
        assert!(is_inter_edge(&g, &split, bc).unwrap());
        assert!(is_inter_edge(&g, &split, EdgeId(7)).is_err());
    }

    #[test]
    fn partition_map_validation() {
        assert!(PartitionMap::new(0, vec![]).is_err());
        assert!(PartitionMap::new(2, vec![0, 2]).is_err());
        let mut p = PartitionMap::new(2, vec![0, 1, 1]).unwrap();
        assert_eq!(p.sizes(), vec![1, 2]);
        p.set(VertexId(0), PartitionId(1)).unwrap();
        assert_eq!(p.get(VertexId(0)), PartitionId(1));
        assert!(p.set(VertexId(0), PartitionId(2)).is_err());
        assert!(p.set(VertexId(3), PartitionId(0)).is_err());
    }

    #[test]
    fn undirected_view_examples() {
        let mut g = Graph::with_vertices(2, VertexKind::Generic);
        g.add_edge(VertexId(0), VertexId(1), 0.4, EdgeLabel::Plain).unwrap();
        g.add_edge(VertexId(1), VertexId(0), 0.6, EdgeLabel::Plain).unwrap();
        let view = g.undirected_view();
        assert_eq!(view.num_edges(), 1);
        assert_eq!(view.neighbors(0).collect::<Vec<_>>(), vec![(1, 1.0)]);
        assert_eq!(view.neighbors(1).collect::<Vec<_>>(), vec![(0, 1.0)]);

        // merged weights are capped at 1.0
        g.add_edge(VertexId(0), VertexId(1), 0.5, EdgeLabel::Plain).unwrap();
        assert_eq!(g.undirected_view().weight(0, 1), Some(1.0));

        let mut path = Graph::with_vertices(3, VertexKind::Generic);
        path.add_edge(VertexId(0), VertexId(1), 1.0, EdgeLabel::Plain).unwrap();
        path.add_edge(VertexId(1), VertexId(2), 1.0, EdgeLabel::Plain).unwrap();
        let view = path.undirected_view();
        assert_eq!((0..3).map(|v| view.degree(v)).collect::<Vec<_>>(), vec![1.0, 2.0, 1.0]);

        let empty = Graph::new().undirected_view();
        assert_eq!(empty.num_vertices(), 0);
        assert_eq!(empty.num_edges(), 0);
    }

    #[test]
    fn view_rows_are_sorted() {
        let mut g = Graph::with_vertices(5, VertexKind::Generic);
        for (u, v) in [(4, 0), (0, 2), (3, 0), (1, 0), (2, 4), (4, 1)] {
            g.add_edge(VertexId(u), VertexId(v), 1.0, EdgeLabel::Plain).unwrap();
        }
        let view = g.undirected_view();
        for v in 0..5 {
            let ids = view.neighbor_ids(v);
            assert!(ids.windows(2).all(|w| w[0] < w[1]), "row {v}: {ids:?}");
        }
        assert_eq!(view.neighbor_ids(0), &[1, 2, 3, 4]);
        assert_eq!(view.neighbor_ids(4), &[0, 1, 2]);
    }
}
