//! Generators shared by the round-trip tests and the acceptance target.

use std::collections::BTreeSet;

use diffpart_core::graph::Properties;
use diffpart_core::workloads::{OpPattern, Operation, OperationLog};
use diffpart_core::{EdgeLabel, Graph, PartitionMap, Scalar, VertexId, VertexKind};
use proptest::prelude::*;

pub fn weight() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), (1u32..=1000).prop_map(|i| i as f64 / 1000.0), 1e-6f64..=1.0]
}

pub fn simple_graph() -> impl Strategy<Value = Graph> {
    (1usize..30).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, weight()), 0..3 * n).prop_map(move |edges| {
            let mut g = Graph::with_vertices(n, VertexKind::Generic);
            let mut seen = BTreeSet::new();
            for (a, b, w) in edges {
                if a != b && seen.insert((a.min(b), a.max(b))) {
                    g.add_edge(VertexId(a.min(b)), VertexId(a.max(b)), w, EdgeLabel::Plain).unwrap();
                }
            }
            g
        })
    })
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        any::<i64>().prop_map(Scalar::Int),
        prop_oneof![prop::num::f64::NORMAL, Just(0.0)].prop_map(Scalar::Float),
        "[a-zA-Z0-9 &\"_.-]{0,10}".prop_map(Scalar::Text),
    ]
}

pub fn properties() -> impl Strategy<Value = Properties> {
    prop::collection::btree_map("p_[a-z0-9]{1,4}", scalar(), 0..3)
}

pub fn rich_graph() -> impl Strategy<Value = (Graph, Option<PartitionMap>)> {
    (1usize..15, 1u32..5).prop_flat_map(|(n, k)| {
        let vertices = prop::collection::vec((prop::sample::select(VertexKind::ALL.to_vec()), properties()), n);
        let edges = prop::collection::vec((0..n, 0..n, weight(), prop::sample::select(EdgeLabel::ALL.to_vec()), properties()), 0..2 * n);
        let partition = prop::option::of(prop::collection::vec(0..k, n));
        (vertices, edges, partition).prop_map(move |(vertices, edges, partition)| {
            let mut g = Graph::new();
            for (kind, mut props) in vertices {
                if kind == VertexKind::GisPoint {
                    props.insert("latitude".into(), Scalar::Float(45.5));
                    props.insert("longitude".into(), Scalar::Float(-3.25));
                }
                g.add_vertex_with(kind, props).unwrap();
            }
            for (a, b, w, label, props) in edges {
                let e = g.add_edge(VertexId(a), VertexId(b), w, label).unwrap();
                for (key, value) in props {
                    g.set_edge_property(e, &key, value).unwrap();
                }
            }
            (g, partition.map(|a| PartitionMap::new(k, a).unwrap()))
        })
    })
}

pub fn operation_log() -> impl Strategy<Value = OperationLog> {
    let op = (any::<u64>(), prop::sample::select(OpPattern::ALL.to_vec()), 0usize..100_000, 0usize..100_000).prop_map(
        |(seq, pattern, start, end)| Operation {
            seq,
            pattern,
            start: VertexId(start),
            end: pattern.has_end().then_some(VertexId(end)),
        },
    );
    (prop::option::of(any::<u64>()), prop::collection::vec(op, 0..20)).prop_map(|(seed, ops)| OperationLog { seed, ops })
}

pub fn bytes<F: FnOnce(&mut Vec<u8>)>(f: F) -> Vec<u8> {
    let mut out = Vec::new();
    f(&mut out);
    out
}
