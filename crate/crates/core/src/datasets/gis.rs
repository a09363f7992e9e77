use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, Graph, Properties, Scalar, VertexId, VertexKind, LATITUDE, LONGITUDE, WEIGHT};
use crate::rng;

/// `(longitude, latitude)` of Bucharest, Iasi, Galati, Timisoara, Constanta.
pub const DEFAULT_CITIES: [(f64, f64); 5] =
    [(26.10, 44.43), (27.60, 47.16), (28.05, 45.44), (21.23, 45.75), (28.63, 44.17)];

const LON_RANGE: (f64, f64) = (20.0, 30.0);
const LAT_RANGE: (f64, f64) = (40.0, 50.0);

/// Parameters of the road-network generator: dense random-geometric
/// clusters around city centers, joined by sparse rural corridors with
/// dead-end side roads.
#[derive(Debug, Clone, PartialEq)]
pub struct GisGenSpec {
    pub seed: u64,
    /// City centers as `(longitude, latitude)`.
    pub cities: Vec<(f64, f64)>,
    pub urban_vertices_per_city: usize,
    pub rural_vertices: usize,
    /// Standard deviation (degrees) of urban points around their center.
    pub city_spread: f64,
    /// Nearest neighbors each urban vertex connects to.
    pub urban_neighbors: usize,
    /// Share of rural vertices placed on side roads rather than corridors.
    pub side_road_share: f64,
    /// Travel-time multiplier per degree on city streets and rural roads.
    pub urban_slowness: f64,
    pub rural_slowness: f64,
}

impl Default for GisGenSpec {
    fn default() -> Self {
        GisGenSpec {
            seed: 1,
            cities: DEFAULT_CITIES.to_vec(),
            urban_vertices_per_city: 1_000,
            rural_vertices: 5_000,
            city_spread: 0.08,
            urban_neighbors: 4,
            side_road_share: 0.3,
            urban_slowness: 2.0,
            rural_slowness: 1.0,
        }
    }
}

impl GisGenSpec {
    /// Spec sized to roughly `target` vertices, half of them urban.
    pub fn with_target(seed: u64, target: usize) -> Self {
        let base = Self::default();
        let cities = base.cities.len();
        let urban = target / 2 / cities;
        GisGenSpec { seed, urban_vertices_per_city: urban, rural_vertices: target - urban * cities, ..base }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.cities.is_empty() {
            return bad("dataset.cities must name at least one city");
        }
        for &(lon, lat) in &self.cities {
            if !(LON_RANGE.0..=LON_RANGE.1).contains(&lon) || !(LAT_RANGE.0..=LAT_RANGE.1).contains(&lat) {
                return bad("dataset.cities must lie within longitude 20-30 and latitude 40-50");
            }
        }
        if self.urban_vertices_per_city == 0 {
            return bad("dataset.urban_per_city must be at least 1");
        }
        if self.urban_neighbors == 0 {
            return bad("dataset.urban_neighbors must be at least 1");
        }
        if !(0.0..1.0).contains(&self.side_road_share) {
            return bad("dataset.side_road_share must lie in [0, 1)");
        }
        if !(self.urban_slowness > 0.0 && self.rural_slowness > 0.0 && self.city_spread > 0.0) {
            return bad("dataset slowness factors and city spread must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GisOutput {
    pub graph: Graph,
    /// Edges added to join disconnected components.
    pub bridges_added: usize,
    /// Vertex ids of each city's urban cluster.
    pub urban: Vec<Vec<VertexId>>,
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    libm::hypot(a.0 - b.0, a.1 - b.1)
}

fn clamp_box(p: (f64, f64)) -> (f64, f64) {
    (p.0.clamp(LON_RANGE.0, LON_RANGE.1), p.1.clamp(LAT_RANGE.0, LAT_RANGE.1))
}

fn gaussian(r: &mut rng::Rng) -> f64 {
    // Box-Muller
    let u1: f64 = 1.0 - r.gen::<f64>();
    let u2: f64 = r.gen();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

struct Builder {
    points: Vec<(f64, f64)>,
    roads: BTreeSet<(usize, usize)>,
    slowness: Vec<f64>,
    ordered: Vec<(usize, usize)>,
}

impl Builder {
    fn point(&mut self, p: (f64, f64)) -> usize {
        self.points.push(clamp_box(p));
        self.points.len() - 1
    }

    fn road(&mut self, a: usize, b: usize, slowness: f64) {
        if a == b {
            return;
        }
        let key = (a.min(b), a.max(b));
        if self.roads.insert(key) {
            self.ordered.push(key);
            self.slowness.push(slowness);
        }
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn generate_gis(spec: &GisGenSpec) -> Result<GisOutput> {
    spec.validate()?;
    let mut r = rng::seeded(spec.seed);
    let mut b = Builder { points: Vec::new(), roads: BTreeSet::new(), slowness: Vec::new(), ordered: Vec::new() };

    // Urban clusters: Gaussian scatter joined to nearest neighbors.
    let mut urban = Vec::with_capacity(spec.cities.len());
    for &center in &spec.cities {
        let ids: Vec<usize> = (0..spec.urban_vertices_per_city)
            .map(|_| {
                let p = (center.0 + spec.city_spread * gaussian(&mut r), center.1 + spec.city_spread * gaussian(&mut r));
                b.point(p)
            })
            .collect();
        let mut near: Vec<(f64, usize)> = Vec::with_capacity(ids.len());
        for &u in &ids {
            near.clear();
            near.extend(ids.iter().filter(|&&v| v != u).map(|&v| (dist(b.points[u], b.points[v]), v)));
            let m = spec.urban_neighbors.min(near.len());
            if m > 0 {
                near.select_nth_unstable_by(m - 1, |x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            }
            let picked: Vec<usize> = near[..m].iter().map(|&(_, v)| v).collect();
            for v in picked {
                b.road(u, v, spec.urban_slowness);
            }
        }
        urban.push(ids);
    }

    // Rural corridors between successive cities, split by length.
    let corridors: Vec<(usize, usize)> = (1..spec.cities.len()).map(|i| (i - 1, i)).collect();
    let lengths: Vec<f64> = corridors.iter().map(|&(i, j)| dist(spec.cities[i], spec.cities[j])).collect();
    let total_len: f64 = lengths.iter().sum();
    let side_total = (spec.rural_vertices as f64 * spec.side_road_share) as usize;
    let main_total = spec.rural_vertices - side_total;
    let mut chain_vertices: Vec<usize> = Vec::new();
    let mut assigned = 0usize;
    for (idx, &(i, j)) in corridors.iter().enumerate() {
        let count = if idx + 1 == corridors.len() {
            main_total - assigned
        } else {
            (main_total as f64 * lengths[idx] / total_len) as usize
        };
        assigned += count;
        let (a, z) = (spec.cities[i], spec.cities[j]);
        let nearest = |ids: &[usize], target: (f64, f64), pts: &[(f64, f64)]| {
            *ids.iter().min_by(|&&x, &&y| dist(pts[x], target).total_cmp(&dist(pts[y], target)).then(x.cmp(&y))).unwrap()
        };
        let start = nearest(&urban[i], z, &b.points);
        let end = nearest(&urban[j], a, &b.points);
        let (pa, pz) = (b.points[start], b.points[end]);
        let len = dist(pa, pz).max(1e-9);
        let normal = (-(pz.1 - pa.1) / len, (pz.0 - pa.0) / len);
        let jitter = len / (count as f64 + 1.0);
        let mut prev = start;
        for t in 1..=count {
            let f = t as f64 / (count as f64 + 1.0);
            let off = jitter * (r.gen::<f64>() - 0.5);
            let p = (pa.0 + f * (pz.0 - pa.0) + off * normal.0, pa.1 + f * (pz.1 - pa.1) + off * normal.1);
            let v = b.point(p);
            b.road(prev, v, spec.rural_slowness);
            chain_vertices.push(v);
            prev = v;
        }
        b.road(prev, end, spec.rural_slowness);
    }
    if chain_vertices.is_empty() && side_total > 0 {
        // Single city: side roads leave from its urban fringe instead.
        chain_vertices.extend(urban[0].iter().copied());
    }

    // Dead-end side roads of one to three vertices off corridor vertices.
    let mut side_left = side_total;
    let mut is_junction = BTreeSet::new();
    while side_left > 0 && !chain_vertices.is_empty() {
        let anchor = chain_vertices[r.gen_range(0..chain_vertices.len())];
        if !is_junction.insert(anchor) && is_junction.len() < chain_vertices.len() {
            continue;
        }
        let len = r.gen_range(1..=3usize).min(side_left);
        let dir = r.gen::<f64>() * core::f64::consts::TAU;
        let step = 0.01 + 0.02 * r.gen::<f64>();
        let mut prev = anchor;
        for s in 1..=len {
            let base = b.points[anchor];
            let p = (base.0 + step * s as f64 * libm::cos(dir), base.1 + step * s as f64 * libm::sin(dir));
            let v = b.point(p);
            b.road(prev, v, spec.rural_slowness);
            prev = v;
        }
        side_left -= len;
    }

    // Join components to their nearest outside vertex.
    let n = b.points.len();
    let mut dsu = Dsu((0..n).collect());
    for &(u, v) in &b.ordered {
        dsu.union(u, v);
    }
    let mut bridges_added = 0;
    loop {
        let mut comp_of = vec![0usize; n];
        let mut sizes = alloc::collections::BTreeMap::new();
        for (v, c) in comp_of.iter_mut().enumerate() {
            *c = dsu.find(v);
            *sizes.entry(*c).or_insert(0usize) += 1;
        }
        if sizes.len() <= 1 {
            break;
        }
        let (&smallest, _) = sizes.iter().min_by_key(|&(&c, &s)| (s, c)).unwrap();
        let members: Vec<usize> = (0..n).filter(|&v| comp_of[v] == smallest).collect();
        let mut best = (f64::INFINITY, 0, 0);
        for &u in &members {
            for v in 0..n {
                if comp_of[v] != smallest {
                    let d = dist(b.points[u], b.points[v]);
                    if d < best.0 {
                        best = (d, u, v);
                    }
                }
            }
        }
        b.road(best.1, best.2, spec.rural_slowness);
        dsu.union(best.1, best.2);
        bridges_added += 1;
    }

    // Travel times normalized into (0, 1].
    let raw: Vec<f64> = b
        .ordered
        .iter()
        .zip(&b.slowness)
        .map(|(&(u, v), &s)| dist(b.points[u], b.points[v]) * s)
        .collect();
    let max_raw = raw.iter().copied().fold(0.0, f64::max).max(1e-12);

    let mut g = Graph::new();
    for &(lon, lat) in &b.points {
        let mut props = Properties::new();
        props.insert(LONGITUDE.into(), Scalar::Float(lon));
        props.insert(LATITUDE.into(), Scalar::Float(lat));
        g.add_vertex_with(VertexKind::GisPoint, props)?;
    }
    for (&(u, v), &t) in b.ordered.iter().zip(&raw) {
        let w = (t / max_raw).clamp(1e-9, 1.0);
        let e = g.add_edge(VertexId(u), VertexId(v), w, EdgeLabel::Road)?;
        g.set_edge_property(e, WEIGHT, Scalar::Float(w))?;
    }
    let urban = urban.into_iter().map(|ids| ids.into_iter().map(VertexId).collect()).collect();
    Ok(GisOutput { graph: g, bridges_added, urban })
}
