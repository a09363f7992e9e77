//! Baseline partitioning methods: uniform random, file-system subtrees and
//! longitude bands.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, Graph, PartitionMap, VertexId, VertexKind};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Random,
    HardcodedFs,
    HardcodedGisLongitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionerSpec {
    pub method: Method,
    pub k: u32,
    pub seed: u64,
}

impl PartitionerSpec {
    pub fn partition(&self, g: &Graph) -> Result<PartitionMap> {
        match self.method {
            Method::Random => partition_random(g.num_vertices(), self.k, self.seed),
            Method::HardcodedFs => partition_fs_subtrees(g, self.k),
            Method::HardcodedGisLongitude => partition_gis_longitude(g, self.k),
        }
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidArgument("partition count k must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// I.i.d. uniform assignment of `num_vertices` vertices to `k` partitions.
pub fn partition_random(num_vertices: usize, k: u32, seed: u64) -> Result<PartitionMap> {
    check_k(k)?;
    let mut r = rng::seeded(seed);
    let assignment = (0..num_vertices).map(|_| r.gen_range(0..k)).collect();
    PartitionMap::new(k, assignment)
}

/// Sorts vertices by longitude (ties by id) and cuts the order into `k`
/// bands of equal count.
pub fn partition_gis_longitude(g: &Graph, k: u32) -> Result<PartitionMap> {
    check_k(k)?;
    let mut keyed = Vec::with_capacity(g.num_vertices());
    for v in g.vertices() {
        let lon = v
            .property(crate::graph::LONGITUDE)
            .and_then(|s| s.as_f64())
            .ok_or_else(|| Error::MissingProperty { entity: format!("{}", v.id), key: crate::graph::LONGITUDE.into() })?;
        keyed.push((lon, v.id.0));
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let n = keyed.len();
    let mut assignment = vec![0u32; n];
    for (rank, &(_, v)) in keyed.iter().enumerate() {
        assignment[v] = ((rank * k as usize) / n) as u32;
    }
    PartitionMap::new(k, assignment)
}

/// Parent of every vertex along `CHILD`/`MEMBER` edges, if any.
pub fn tree_parents(g: &Graph) -> Vec<Option<VertexId>> {
    let mut parent = vec![None; g.num_vertices()];
    for e in g.edges() {
        if matches!(e.label, EdgeLabel::Child | EdgeLabel::Member) {
            parent[e.end.0] = Some(e.start);
        }
    }
    parent
}

fn tree_children(g: &Graph, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
    g.out_edges(v)
        .unwrap_or(&[])
        .iter()
        .map(move |&e| &g.edges()[e.0])
        .filter(|e| matches!(e.label, EdgeLabel::Child | EdgeLabel::Member))
        .map(|e| e.end)
}

/// Subtree partitioning for file-system graphs.
///
/// Leaf folders are listed in depth-first order of the hierarchy so that
/// folders of one subtree sit next to each other, then the list is cut into
/// `k` contiguous segments of (nearly) equal vertex weight, where a leaf
/// folder weighs itself plus its files and their events. Higher vertices
/// (folders, users, organizations) take the majority partition of their
/// children, ties to the lowest id; files follow their parent folder and
/// events follow the entity they record.
pub fn partition_fs_subtrees(g: &Graph, k: u32) -> Result<PartitionMap> {
    check_k(k)?;
    let wrong = |reason: &str| Error::WrongDataset { expected: "file-system", reason: reason.into() };
    if !g.vertices().iter().any(|v| v.kind == VertexKind::Folder) {
        return Err(wrong("no FOLDER vertices"));
    }
    let parent = tree_parents(g);
    let roots: Vec<VertexId> = g
        .vertices()
        .iter()
        .filter(|v| parent[v.id.0].is_none() && matches!(v.kind, VertexKind::Organization | VertexKind::User | VertexKind::Folder))
        .map(|v| v.id)
        .collect();

    // Event weight hanging off each file or folder.
    let mut event_weight = vec![0usize; g.num_vertices()];
    let mut event_owner = vec![None; g.num_vertices()];
    for e in g.edges() {
        let (s, t) = (&g.vertices()[e.start.0], &g.vertices()[e.end.0]);
        match e.label {
            EdgeLabel::Created if t.kind == VertexKind::Event => event_owner[t.id.0] = Some(s.id),
            EdgeLabel::Subject
                if s.kind == VertexKind::Event && matches!(t.kind, VertexKind::File | VertexKind::Folder) =>
            {
                event_owner[s.id.0].get_or_insert(t.id);
            }
            _ => {}
        }
    }
    for owner in event_owner.iter().flatten() {
        event_weight[owner.0] += 1;
    }

    // Depth-first order of vertices, and the leaf folders in that order.
    let mut order = Vec::with_capacity(g.num_vertices());
    let mut stack: Vec<VertexId> = roots.iter().rev().copied().collect();
    let mut seen = vec![false; g.num_vertices()];
    while let Some(v) = stack.pop() {
        if core::mem::replace(&mut seen[v.0], true) {
            return Err(wrong("hierarchy is not a forest"));
        }
        order.push(v);
        let mut kids: Vec<VertexId> = tree_children(g, v).collect();
        kids.sort();
        stack.extend(kids.into_iter().rev());
    }
    let is_folder = |v: VertexId| g.vertices()[v.0].kind == VertexKind::Folder;
    let leaves: Vec<VertexId> = order
        .iter()
        .copied()
        .filter(|&v| is_folder(v) && !tree_children(g, v).any(is_folder))
        .collect();
    let leaf_weight = |v: VertexId| -> usize {
        1 + event_weight[v.0]
            + tree_children(g, v).map(|c| 1 + event_weight[c.0]).sum::<usize>()
    };
    let weights: Vec<usize> = leaves.iter().map(|&v| leaf_weight(v)).collect();
    let total: usize = weights.iter().sum();

    let mut assignment: Vec<Option<u32>> = vec![None; g.num_vertices()];
    let mut before = 0usize;
    for (&leaf, &w) in leaves.iter().zip(&weights) {
        // Segment chosen by the midpoint of the leaf's weight interval.
        let mid2 = 2 * before + w;
        let seg = ((mid2 as u128 * k as u128) / (2 * total as u128)) as u32;
        assignment[leaf.0] = Some(seg.min(k - 1));
        before += w;
    }

    // Ancestors in reverse depth-first order see all children first.
    for &v in order.iter().rev() {
        if assignment[v.0].is_some() {
            continue;
        }
        let kind = g.vertices()[v.0].kind;
        if kind == VertexKind::File {
            continue;
        }
        let mut votes: BTreeMap<u32, usize> = BTreeMap::new();
        for c in tree_children(g, v) {
            if g.vertices()[c.0].kind != VertexKind::File {
                if let Some(pid) = assignment[c.0] {
                    *votes.entry(pid).or_default() += 1;
                }
            }
        }
        let mut best: Option<(u32, usize)> = None;
        for (&pid, &n) in &votes {
            if best.is_none_or(|(_, m)| n > m) {
                best = Some((pid, n));
            }
        }
        assignment[v.0] = Some(best.map_or(0, |(pid, _)| pid));
    }
    // Files follow their parent folder.
    for &v in &order {
        if g.vertices()[v.0].kind == VertexKind::File {
            let p = parent[v.0].and_then(|p| assignment[p.0]).unwrap_or(0);
            assignment[v.0] = Some(p);
        }
    }
    // Events follow the entity they record; anything else left goes to 0.
    let mut out = vec![0u32; g.num_vertices()];
    for v in g.vertex_ids() {
        out[v.0] = match assignment[v.0] {
            Some(p) => p,
            None => event_owner[v.0].and_then(|o| assignment[o.0]).unwrap_or(0),
        };
    }
    PartitionMap::new(k, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Properties, Scalar, LATITUDE, LONGITUDE};

    #[test]
    fn random_examples() {
        assert_eq!(partition_random(10, 1, 3).unwrap().as_slice(), &[0; 10]);
        assert_eq!(partition_random(500, 4, 9).unwrap(), partition_random(500, 4, 9).unwrap());
        assert_ne!(partition_random(500, 4, 9).unwrap(), partition_random(500, 4, 10).unwrap());
        assert!(partition_random(3, 0, 1).is_err());
    }

    #[test]
    fn random_sizes_are_balanced() {
        let p = partition_random(100_000, 4, 11).unwrap();
        for s in p.sizes() {
            let share = s as f64 / 100_000.0;
            assert!((share - 0.25).abs() < 0.01, "share {share}");
        }
    }

    fn gis_line(lons: &[f64]) -> Graph {
        let mut g = Graph::new();
        for &lon in lons {
            let mut props = Properties::new();
            props.insert(LONGITUDE.into(), Scalar::Float(lon));
            props.insert(LATITUDE.into(), Scalar::Float(45.0));
            g.add_vertex_with(VertexKind::GisPoint, props).unwrap();
        }
        g
    }

    #[test]
    fn longitude_bands() {
        let g = gis_line(&[3.0, 1.0, 4.0, 2.0]);
        assert_eq!(partition_gis_longitude(&g, 1).unwrap().as_slice(), &[0; 4]);
        assert_eq!(partition_gis_longitude(&g, 2).unwrap().as_slice(), &[1, 0, 1, 0]);
        let g = gis_line(&[5.0, 1.0, 9.0, 2.0, 2.0, 7.0, 3.0]);
        let sizes = partition_gis_longitude(&g, 3).unwrap().sizes();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        let mut bare = Graph::with_vertices(2, VertexKind::Generic);
        assert!(matches!(partition_gis_longitude(&bare, 2), Err(Error::MissingProperty { .. })));
        bare.set_vertex_property(VertexId(0), LONGITUDE, Scalar::Float(1.0)).unwrap();
        assert!(partition_gis_longitude(&bare, 2).is_err());
    }

    /// Root folder with a perfect binary folder tree of depth 3 and two files
    /// per leaf folder.
    fn binary_tree() -> (Graph, Vec<VertexId>) {
        let mut g = Graph::new();
        let root = g.add_vertex(VertexKind::Folder);
        let mut level = vec![root];
        let mut all = vec![root];
        for _ in 0..2 {
            let mut next = Vec::new();
            for &f in &level {
                for _ in 0..2 {
                    let c = g.add_vertex(VertexKind::Folder);
                    g.add_edge(f, c, 1.0, EdgeLabel::Child).unwrap();
                    next.push(c);
                    all.push(c);
                }
            }
            level = next;
        }
        for &leaf in &level {
            for _ in 0..2 {
                let file = g.add_vertex(VertexKind::File);
                g.add_edge(leaf, file, 1.0, EdgeLabel::Child).unwrap();
            }
        }
        (g, all)
    }

    #[test]
    fn fs_subtrees_binary_tree() {
        let (g, folders) = binary_tree();
        assert_eq!(partition_fs_subtrees(&g, 1).unwrap().as_slice(), &vec![0; g.num_vertices()][..]);
        let p = partition_fs_subtrees(&g, 2).unwrap();
        let (left, right) = (folders[1], folders[2]);
        assert_eq!(p.get(left), p.get(folders[3]));
        assert_eq!(p.get(left), p.get(folders[4]));
        assert_eq!(p.get(right), p.get(folders[5]));
        assert_eq!(p.get(right), p.get(folders[6]));
        assert_ne!(p.get(left), p.get(right));
        let cut = crate::metrics::edge_cut(&g.undirected_view(), &p);
        assert!(cut.weight <= 2.0);
        assert_eq!(p.sizes(), vec![8, 7]);
    }

    #[test]
    fn fs_subtrees_rejects_other_graphs() {
        let g = gis_line(&[1.0, 2.0]);
        assert!(matches!(partition_fs_subtrees(&g, 2), Err(Error::WrongDataset { .. })));
    }
}
