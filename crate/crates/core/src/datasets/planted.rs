use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, Graph, PartitionMap, VertexId, VertexKind};
use crate::rng;

/// Communities of the given sizes, each a ring plus random chords with
/// expected degree `intra_degree`, joined by `bridges` random edges between
/// consecutive communities.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    pub seed: u64,
    pub community_sizes: Vec<usize>,
    pub intra_degree: f64,
    pub bridges: usize,
}

impl PlantedSpec {
    pub fn two_communities(seed: u64, size: usize) -> Self {
        PlantedSpec { seed, community_sizes: alloc::vec![size, size], intra_degree: 8.0, bridges: 10 }
    }
}

/// The graph and its planted partitioning.
pub fn generate_planted(spec: &PlantedSpec) -> Result<(Graph, PartitionMap)> {
    if spec.community_sizes.is_empty() || spec.community_sizes.iter().any(|&s| s < 3) {
        return Err(Error::InvalidConfig("planted communities need at least 3 vertices each".into()));
    }
    let mut r = rng::seeded(spec.seed);
    let n: usize = spec.community_sizes.iter().sum();
    let mut g = Graph::with_vertices(n, VertexKind::Generic);
    let mut assignment = Vec::with_capacity(n);
    let mut starts = Vec::new();
    let mut seen = BTreeSet::new();
    let mut add = |g: &mut Graph, a: usize, b: usize| -> Result<()> {
        let key = (a.min(b), a.max(b));
        if a != b && seen.insert(key) {
            g.add_edge(VertexId(key.0), VertexId(key.1), 1.0, EdgeLabel::Plain)?;
        }
        Ok(())
    };
    let mut at = 0;
    for (c, &size) in spec.community_sizes.iter().enumerate() {
        starts.push(at);
        assignment.extend(core::iter::repeat_n(c as u32, size));
        let p = ((spec.intra_degree - 2.0) / (size - 1) as f64).clamp(0.0, 1.0);
        for i in 0..size {
            add(&mut g, at + i, at + (i + 1) % size)?;
            for j in i + 2..size {
                if r.gen_bool(p) {
                    add(&mut g, at + i, at + j)?;
                }
            }
        }
        at += size;
    }
    for c in 0..spec.community_sizes.len().saturating_sub(1) {
        let (a, b) = (spec.community_sizes[c], spec.community_sizes[c + 1]);
        for _ in 0..spec.bridges {
            let u = starts[c] + r.gen_range(0..a);
            let v = starts[c + 1] + r.gen_range(0..b);
            add(&mut g, u, v)?;
        }
    }
    let k = spec.community_sizes.len() as u32;
    Ok((g, PartitionMap::new(k, assignment)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::edge_cut;

    #[test]
    fn planted_cut_is_the_bridges() {
        let (g, p) = generate_planted(&PlantedSpec::two_communities(3, 200)).unwrap();
        assert_eq!(g.num_vertices(), 400);
        let cut = edge_cut(&g.undirected_view(), &p);
        assert!(cut.weight >= 1.0 && cut.weight <= 10.0);
        let mean_degree = 2.0 * g.num_edges() as f64 / 400.0;
        assert!((7.0..9.0).contains(&mean_degree), "{mean_degree}");
    }
}
