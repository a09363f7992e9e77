use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, Graph, VertexId, VertexKind};
use crate::rng;

/// Parameters of the directed preferential-attachment follower graph.
///
/// Each arriving user brings on average `edges_per_vertex` follow edges.
/// A `follow_back_share` of them point from an existing user picked by
/// out-degree to the newcomer, the rest from the newcomer to an existing
/// user picked by in-degree. `attachment_offset` is added to every degree when
/// picking, so a larger offset gives a flatter tail.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialGenSpec {
    pub seed: u64,
    pub target_vertices: usize,
    pub edges_per_vertex: f64,
    pub attachment_offset: usize,
    pub follow_back_share: f64,
}

impl Default for SocialGenSpec {
    fn default() -> Self {
        SocialGenSpec { seed: 1, target_vertices: 10_000, edges_per_vertex: 1.4, attachment_offset: 1, follow_back_share: 0.7 }
    }
}

impl SocialGenSpec {
    fn validate(&self) -> Result<()> {
        if self.target_vertices < 3 {
            return Err(Error::InvalidConfig("dataset.vertices must be at least 3 for the social graph".into()));
        }
        if !(1.0..=8.0).contains(&self.edges_per_vertex) {
            return Err(Error::InvalidConfig("dataset.edges_per_vertex must lie in [1, 8]".into()));
        }
        if !(0.0..=1.0).contains(&self.follow_back_share) {
            return Err(Error::InvalidConfig("dataset.follow_back_share must lie in [0, 1]".into()));
        }
        if self.attachment_offset == 0 {
            return Err(Error::InvalidConfig("dataset.attachment_offset must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn generate_social(spec: &SocialGenSpec) -> Result<Graph> {
    spec.validate()?;
    let mut r = rng::seeded(spec.seed);
    let mut g = Graph::with_vertices(spec.target_vertices, VertexKind::SocialUser);
    let mut seen = BTreeSet::new();
    // Every vertex appears `offset` times plus once per incident half-edge.
    let mut by_out: Vec<usize> = Vec::new();
    let mut by_in: Vec<usize> = Vec::new();
    let mut link = |g: &mut Graph, by_out: &mut Vec<usize>, by_in: &mut Vec<usize>, u: usize, v: usize| -> Result<bool> {
        if u == v || !seen.insert((u, v)) {
            return Ok(false);
        }
        g.add_edge(VertexId(u), VertexId(v), 1.0, EdgeLabel::Follows)?;
        by_out.push(u);
        by_in.push(v);
        Ok(true)
    };

    for v in 0..3 {
        for _ in 0..spec.attachment_offset {
            by_out.push(v);
            by_in.push(v);
        }
    }
    for (u, v) in [(0, 1), (1, 2), (2, 0)] {
        link(&mut g, &mut by_out, &mut by_in, u, v)?;
    }

    let extra = spec.edges_per_vertex - 1.0;
    for v in 3..spec.target_vertices {
        let whole = libm::floor(extra) as usize;
        let m = 1 + whole + usize::from(r.gen_bool(extra - whole as f64));
        let mut added = 0;
        let mut attempts = 0;
        while added < m && attempts < 8 * m {
            attempts += 1;
            let ok = if !r.gen_bool(spec.follow_back_share) {
                let u = by_in[r.gen_range(0..by_in.len())];
                link(&mut g, &mut by_out, &mut by_in, v, u)?
            } else {
                let u = by_out[r.gen_range(0..by_out.len())];
                link(&mut g, &mut by_out, &mut by_in, u, v)?
            };
            added += usize::from(ok);
        }
        for _ in 0..spec.attachment_offset {
            by_out.push(v);
            by_in.push(v);
        }
    }
    Ok(g)
}
