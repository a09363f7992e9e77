//! A logically partitioned graph database.
//!
//! Partitions exist only as labels on vertices; edges reside with their
//! start vertex. Every traversal primitive charges one traffic unit to the
//! partition the cursor currently sits on. Only edge retrieval can be
//! global: each edge pulled from a vertex whose far endpoint lives on
//! another partition costs one global unit, every other action one local
//! unit.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Direction, EdgeId, EdgeLabel, Graph, PartitionId, PartitionMap, Scalar, Vertex, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InstanceInfo {
    pub pid: PartitionId,
    pub num_vertices: u64,
    pub num_edges: u64,
    pub local_traffic: u64,
    pub global_traffic: u64,
}

impl InstanceInfo {
    pub fn total_traffic(&self) -> u64 {
        self.local_traffic + self.global_traffic
    }
}

/// Position of one logical client and the traffic of its current operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Cursor {
    partition: PartitionId,
    op_local: u64,
    op_global: u64,
}

impl Cursor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn partition(&self) -> PartitionId {
        self.partition
    }

    pub fn op_local(&self) -> u64 {
        self.op_local
    }

    pub fn op_global(&self) -> u64 {
        self.op_global
    }

    /// Zeroes the per-operation counters.
    pub fn begin_op(&mut self) {
        self.op_local = 0;
        self.op_global = 0;
    }
}

/// Edges retrieved from one vertex, charged as they are pulled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBatch {
    from: VertexId,
    edges: Vec<EdgeId>,
    pos: usize,
}

impl EdgeBatch {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Either kind of graph entity, for property access.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Vertex(VertexId),
    Edge(EdgeId),
}

#[derive(Debug, Clone)]
pub struct EmulatorHandle<'g> {
    graph: &'g Graph,
    partition: PartitionMap,
    infos: Vec<InstanceInfo>,
}

impl<'g> EmulatorHandle<'g> {
    pub fn open(graph: &'g Graph, partition: PartitionMap) -> Result<Self> {
        partition.check_covers(graph.num_vertices())?;
        let mut infos: Vec<InstanceInfo> =
            (0..partition.k()).map(|pid| InstanceInfo { pid: PartitionId(pid), ..Default::default() }).collect();
        for v in graph.vertex_ids() {
            let info = &mut infos[partition.get(v).index()];
            info.num_vertices += 1;
            info.num_edges += graph.out_degree_count(v) as u64;
        }
        Ok(EmulatorHandle { graph, partition, infos })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn partition(&self) -> &PartitionMap {
        &self.partition
    }

    pub fn k(&self) -> u32 {
        self.partition.k()
    }

    fn charge_local(&mut self, cursor: &mut Cursor) {
        self.infos[cursor.partition.index()].local_traffic += 1;
        cursor.op_local += 1;
    }

    fn charge_global(&mut self, cursor: &mut Cursor) {
        self.infos[cursor.partition.index()].global_traffic += 1;
        cursor.op_global += 1;
    }

    /// Index lookup: enters the vertex's partition, then charges one local unit there.
    pub fn lookup_vertex(&mut self, cursor: &mut Cursor, v: VertexId) -> Result<&'g Vertex> {
        let vertex = self.graph.vertex(v)?;
        cursor.partition = self.partition.get(v);
        self.charge_local(cursor);
        Ok(vertex)
    }

    /// Moves the cursor onto `v`'s partition without charging anything.
    pub fn enter(&self, cursor: &mut Cursor, v: VertexId) -> Result<()> {
        cursor.partition = self.partition.try_get(v)?;
        Ok(())
    }

    /// Edges of `v` in `direction`, optionally restricted to one label.
    /// Nothing is charged until edges are pulled with [`Self::next_edge`].
    pub fn get_edges(&self, v: VertexId, direction: Direction, label: Option<EdgeLabel>) -> Result<EdgeBatch> {
        let mut edges = self.graph.incident_edges(v, direction)?;
        if let Some(label) = label {
            edges.retain(|&e| self.graph.edges()[e.0].label == label);
        }
        Ok(EdgeBatch { from: v, edges, pos: 0 })
    }

    /// Pulls the next edge of `batch`: one global unit if its far endpoint
    /// is on another partition than the cursor, else one local unit.
    pub fn next_edge(&mut self, cursor: &mut Cursor, batch: &mut EdgeBatch) -> Option<EdgeId> {
        let e = *batch.edges.get(batch.pos)?;
        batch.pos += 1;
        let far = self.graph.edges()[e.0].other(batch.from);
        if self.partition.get(far) != cursor.partition {
            self.charge_global(cursor);
        } else {
            self.charge_local(cursor);
        }
        Some(e)
    }

    /// Retrieves and pulls every edge of `v` at once.
    pub fn get_all_edges(
        &mut self,
        cursor: &mut Cursor,
        v: VertexId,
        direction: Direction,
        label: Option<EdgeLabel>,
    ) -> Result<Vec<EdgeId>> {
        let mut batch = self.get_edges(v, direction, label)?;
        let mut out = Vec::with_capacity(batch.len());
        while let Some(e) = self.next_edge(cursor, &mut batch) {
            out.push(e);
        }
        Ok(out)
    }

    pub fn get_end_vertex(&mut self, cursor: &mut Cursor, e: EdgeId) -> Result<VertexId> {
        let end = self.graph.edge(e)?.end;
        self.charge_local(cursor);
        cursor.partition = self.partition.get(end);
        Ok(end)
    }

    pub fn get_start_vertex(&mut self, cursor: &mut Cursor, e: EdgeId) -> Result<VertexId> {
        let start = self.graph.edge(e)?.start;
        self.charge_local(cursor);
        cursor.partition = self.partition.get(start);
        Ok(start)
    }

    pub fn vertex_id(&mut self, cursor: &mut Cursor, v: VertexId) -> Result<VertexId> {
        self.graph.vertex(v)?;
        self.charge_local(cursor);
        Ok(v)
    }

    pub fn edge_id(&mut self, cursor: &mut Cursor, e: EdgeId) -> Result<EdgeId> {
        self.graph.edge(e)?;
        self.charge_local(cursor);
        Ok(e)
    }

    pub fn get_property(&mut self, cursor: &mut Cursor, entity: Entity, key: &str) -> Result<&'g Scalar> {
        let props = match entity {
            Entity::Vertex(v) => &self.graph.vertex(v)?.properties,
            Entity::Edge(e) => &self.graph.edge(e)?.properties,
        };
        let value = props.get(key).ok_or_else(|| {
            let entity = match entity {
                Entity::Vertex(v) => alloc::format!("vertex {v}"),
                Entity::Edge(e) => alloc::format!("edge {e}"),
            };
            Error::MissingProperty { entity, key: key.into() }
        })?;
        self.charge_local(cursor);
        Ok(value)
    }

    /// Reassigns every vertex of `vertices` to `target`. Traffic counters are untouched.
    pub fn move_vertices(&mut self, vertices: &[VertexId], target: PartitionId) -> Result<()> {
        if target.0 >= self.partition.k() {
            return Err(Error::PartitionOutOfRange { pid: target, k: self.partition.k() });
        }
        for &v in vertices {
            self.graph.vertex(v)?;
        }
        for &v in vertices {
            let from = self.partition.get(v);
            if from == target {
                continue;
            }
            let out = self.graph.out_degree_count(v) as u64;
            self.infos[from.index()].num_vertices -= 1;
            self.infos[from.index()].num_edges -= out;
            self.infos[target.index()].num_vertices += 1;
            self.infos[target.index()].num_edges += out;
            self.partition.set(v, target)?;
        }
        Ok(())
    }

    pub fn instance_info(&self, pid: PartitionId) -> Result<InstanceInfo> {
        self.infos.get(pid.index()).copied().ok_or(Error::PartitionOutOfRange { pid, k: self.partition.k() })
    }

    pub fn snapshot_all(&self) -> Vec<InstanceInfo> {
        self.infos.clone()
    }

    pub fn total_local(&self) -> u64 {
        self.infos.iter().map(|i| i.local_traffic).sum()
    }

    pub fn total_global(&self) -> u64 {
        self.infos.iter().map(|i| i.global_traffic).sum()
    }

    /// Zeroes all traffic counters, keeping the partitioning.
    pub fn reset_traffic(&mut self) {
        for info in &mut self.infos {
            info.local_traffic = 0;
            info.global_traffic = 0;
        }
    }

    pub fn into_partition(self) -> PartitionMap {
        self.partition
    }
}
