use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, Graph, VertexId, VertexKind};
use crate::rng;

/// Parameters of the file-system generator.
///
/// The hierarchy is organization → user → root folder → folder tree →
/// files. Every folder and file has a creation event; a share of files has
/// one more (modification) event. Folders fan out to `children_per_folder`
/// entries, of which `subfolders_per_folder` are folders while depth allows.
#[derive(Debug, Clone, PartialEq)]
pub struct FsGenSpec {
    pub seed: u64,
    pub target_vertices: usize,
    pub num_orgs: usize,
    pub users_per_org: (usize, usize),
    pub children_per_folder: (usize, usize),
    pub subfolders_per_folder: (usize, usize),
    pub max_depth: usize,
    pub extra_event_prob: f64,
}

impl Default for FsGenSpec {
    fn default() -> Self {
        FsGenSpec {
            seed: 1,
            target_vertices: 10_000,
            num_orgs: 5,
            users_per_org: (2, 3),
            children_per_folder: (29, 33),
            subfolders_per_folder: (1, 4),
            max_depth: 4,
            extra_event_prob: 0.25,
        }
    }
}

impl FsGenSpec {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        let range_ok = |(lo, hi): (usize, usize)| lo <= hi;
        if self.num_orgs == 0 {
            return bad("dataset.orgs must be at least 1");
        }
        if !range_ok(self.users_per_org) || self.users_per_org.0 == 0 {
            return bad("dataset.users_per_org must be a non-empty range starting at 1 or more");
        }
        if !range_ok(self.children_per_folder) || self.children_per_folder.0 == 0 {
            return bad("dataset.children_per_folder must be a non-empty range starting at 1 or more");
        }
        if !range_ok(self.subfolders_per_folder) || self.subfolders_per_folder.1 > self.children_per_folder.0 {
            return bad("dataset.subfolders_per_folder must be a range within children_per_folder");
        }
        if !(0.0..=1.0).contains(&self.extra_event_prob) {
            return bad("dataset.extra_event_prob must lie in [0, 1]");
        }
        Ok(())
    }
}

struct TreeEntry {
    id: VertexId,
    owner: VertexId,
}

/// Generates a file-system graph of roughly `spec.target_vertices` vertices.
pub fn generate_fs(spec: &FsGenSpec) -> Result<Graph> {
    spec.validate()?;
    let mut r = rng::seeded(spec.seed);
    let mut g = Graph::new();

    let mut users = Vec::new();
    for _ in 0..spec.num_orgs {
        let org = g.add_vertex(VertexKind::Organization);
        let n = r.gen_range(spec.users_per_org.0..=spec.users_per_org.1);
        for _ in 0..n {
            let user = g.add_vertex(VertexKind::User);
            g.add_edge(org, user, 1.0, EdgeLabel::Member)?;
            users.push(user);
        }
    }
    let fixed = g.num_vertices();
    // Every user needs at least a root folder and its creation event.
    if spec.target_vertices < fixed + 2 * users.len() {
        return Err(Error::InvalidConfig(alloc::format!(
            "dataset.vertices={} cannot hold {} organizations and {} users",
            spec.target_vertices,
            spec.num_orgs,
            users.len()
        )));
    }
    // Tree vertices X carry about X * (1 + q * file share) events.
    let per_tree_vertex = 2.0 + spec.extra_event_prob * 0.95;
    let tree_budget = ((spec.target_vertices - fixed) as f64 / per_tree_vertex) as usize;
    let tree_budget = tree_budget.max(users.len());

    let avg_children = (spec.children_per_folder.0 + spec.children_per_folder.1) as f64 / 2.0;
    let mut tree: Vec<TreeEntry> = Vec::new();
    // Budget a tree could not use passes to the next user.
    let mut carry = 0usize;
    for (i, &user) in users.iter().enumerate() {
        let budget = tree_budget / users.len() + usize::from(i < tree_budget % users.len()) + carry;
        let root = g.add_vertex(VertexKind::Folder);
        g.add_edge(user, root, 1.0, EdgeLabel::Child)?;
        tree.push(TreeEntry { id: root, owner: user });
        let mut count = 1usize;
        let mut queue = VecDeque::from([(root, 0usize)]);
        while let Some((folder, depth)) = queue.pop_front() {
            let remaining = budget.saturating_sub(count);
            if remaining == 0 {
                continue;
            }
            let c = r.gen_range(spec.children_per_folder.0..=spec.children_per_folder.1).min(remaining);
            let mut subs = 0;
            if depth + 1 < spec.max_depth {
                let want = r.gen_range(spec.subfolders_per_folder.0..=spec.subfolders_per_folder.1).min(c);
                // Only open folders the remaining budget can still fill.
                let committed = (count + c) as f64 + (queue.len() as f64) * avg_children;
                let room = libm::ceil((budget as f64 - committed) / avg_children).max(0.0) as usize;
                subs = want.min(room);
            }
            for j in 0..c {
                let kind = if j < subs { VertexKind::Folder } else { VertexKind::File };
                let child = g.add_vertex(kind);
                g.add_edge(folder, child, 1.0, EdgeLabel::Child)?;
                tree.push(TreeEntry { id: child, owner: user });
                if kind == VertexKind::Folder {
                    queue.push_back((child, depth + 1));
                }
            }
            count += c;
        }
        carry = budget.saturating_sub(count);
    }

    for entry in &tree {
        let event = g.add_vertex(VertexKind::Event);
        g.add_edge(entry.id, event, 1.0, EdgeLabel::Created)?;
        g.add_edge(event, entry.owner, 1.0, EdgeLabel::Subject)?;
        g.add_edge(event, entry.id, 1.0, EdgeLabel::Subject)?;
    }
    for entry in &tree {
        if g.vertices()[entry.id.0].kind == VertexKind::File && r.gen_bool(spec.extra_event_prob) {
            let event = g.add_vertex(VertexKind::Event);
            g.add_edge(event, entry.owner, 1.0, EdgeLabel::Subject)?;
            g.add_edge(event, entry.id, 1.0, EdgeLabel::Subject)?;
        }
    }
    Ok(g)
}
