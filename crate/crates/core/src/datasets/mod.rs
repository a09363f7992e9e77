//! Seeded synthetic datasets with the topology of a file-system hierarchy,
//! a road network and a follower network.

mod fs;
mod gis;
mod planted;
mod social;

pub use fs::{generate_fs, FsGenSpec};
pub use gis::{generate_gis, GisGenSpec, GisOutput, DEFAULT_CITIES};
pub use planted::{generate_planted, PlantedSpec};
pub use social::{generate_social, SocialGenSpec};

use crate::graph::{Graph, UndirectedView};

/// Which generator produced a graph; drives workload and method choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DatasetKind {
    FileSystem,
    Gis,
    Social,
}

impl DatasetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DatasetKind::FileSystem => "fs",
            DatasetKind::Gis => "gis",
            DatasetKind::Social => "social",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fs" | "filesystem" => Some(DatasetKind::FileSystem),
            "gis" => Some(DatasetKind::Gis),
            "social" | "twitter" => Some(DatasetKind::Social),
            _ => None,
        }
    }

    /// Best guess from vertex kinds.
    pub fn detect(g: &Graph) -> Option<Self> {
        use crate::graph::VertexKind::*;
        g.vertices().iter().find_map(|v| match v.kind {
            Folder | File | Event | Organization | User => Some(DatasetKind::FileSystem),
            GisPoint => Some(DatasetKind::Gis),
            SocialUser => Some(DatasetKind::Social),
            Generic => None,
        })
    }
}

/// Fraction of connected neighbor pairs of `v` in the undirected view.
pub fn local_clustering(view: &UndirectedView, v: usize) -> f64 {
    let nbrs = view.neighbor_ids(v);
    let d = nbrs.len();
    if d < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if view.has_edge(a, b) {
                links += 1;
            }
        }
    }
    links as f64 / (d * (d - 1) / 2) as f64
}

/// Average local clustering coefficient; vertices of degree < 2 count as 0.
pub fn clustering_coefficient(view: &UndirectedView) -> f64 {
    let n = view.num_vertices();
    if n == 0 {
        return 0.0;
    }
    (0..n).map(|v| local_clustering(view, v)).sum::<f64>() / n as f64
}
