//! Partition-quality and load-balance metrics.
//!
//! Structural metrics are evaluated on the undirected view of a graph. The
//! edge cut is single-counted: every crossing pair contributes its weight
//! once, and the fraction is taken against the total pair weight. The
//! per-partition (double-counted) sum is available via [`partition_degree`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{PartitionId, PartitionMap, UndirectedView};

/// Sum of member degrees of `part`.
pub fn volume(view: &UndirectedView, p: &PartitionMap, part: PartitionId) -> f64 {
    (0..view.num_vertices())
        .filter(|&v| p.as_slice()[v] == part.0)
        .map(|v| view.degree(v))
        .sum()
}

/// Weight of edges with both endpoints inside `part`.
pub fn intra_weight(view: &UndirectedView, p: &PartitionMap, part: PartitionId) -> f64 {
    let a = p.as_slice();
    view.pairs()
        .filter(|&(u, v, _)| a[u] == part.0 && a[v] == part.0)
        .fold(0.0, |s, (_, _, w)| s + w)
}

/// Weight of edges with exactly one endpoint inside `part`.
pub fn partition_degree(view: &UndirectedView, p: &PartitionMap, part: PartitionId) -> f64 {
    let a = p.as_slice();
    view.pairs()
        .filter(|&(u, v, _)| (a[u] == part.0) != (a[v] == part.0))
        .fold(0.0, |s, (_, _, w)| s + w)
}

/// Per-partition `(volume, intra weight, partition degree)` in one pass.
fn partition_sums(view: &UndirectedView, p: &PartitionMap) -> Vec<(f64, f64, f64)> {
    let a = p.as_slice();
    let mut sums = vec![(0.0, 0.0, 0.0); p.k() as usize];
    for (u, v, w) in view.pairs() {
        let (pu, pv) = (a[u] as usize, a[v] as usize);
        sums[pu].0 += w;
        sums[pv].0 += w;
        if pu == pv {
            sums[pu].1 += w;
        } else {
            sums[pu].2 += w;
            sums[pv].2 += w;
        }
    }
    sums
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCut {
    pub weight: f64,
    pub fraction: f64,
}

pub fn edge_cut(view: &UndirectedView, p: &PartitionMap) -> EdgeCut {
    let a = p.as_slice();
    // Folding from +0 keeps an empty cut from printing as -0.
    let weight = view.pairs().filter(|&(u, v, _)| a[u] != a[v]).fold(0.0, |s, (_, _, w)| s + w);
    let total = view.total_weight();
    let fraction = if total > 0.0 { weight / total } else { 0.0 };
    EdgeCut { weight, fraction }
}

/// Minimum over partitions of partition degree divided by volume.
pub fn conductance(view: &UndirectedView, p: &PartitionMap) -> Result<f64> {
    let mut best = f64::INFINITY;
    for (i, &(vol, _, boundary)) in partition_sums(view, p).iter().enumerate() {
        if vol <= 0.0 {
            return Err(Error::ZeroVolume(PartitionId(i as u32)));
        }
        best = best.min(boundary / vol);
    }
    Ok(best)
}

pub fn modularity(view: &UndirectedView, p: &PartitionMap) -> Result<f64> {
    let total = view.total_weight();
    if total <= 0.0 {
        return Err(Error::EdgelessGraph);
    }
    Ok(partition_sums(view, p)
        .iter()
        .map(|&(vol, intra, _)| {
            let share = vol / (2.0 * total);
            intra / total - share * share
        })
        .sum())
}

/// Absolute difference between non-empty partitions and `desired_k`.
pub fn partition_count_dev(p: &PartitionMap, desired_k: u32) -> u32 {
    let created = p.sizes().iter().filter(|&&s| s > 0).count() as u32;
    created.abs_diff(desired_k)
}

/// Population standard deviation of partition sizes over all `k` partitions.
pub fn partition_size_stdev(p: &PartitionMap) -> f64 {
    let sizes: Vec<f64> = p.sizes().into_iter().map(|s| s as f64).collect();
    population_stdev(&sizes)
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn population_stdev(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mu = mean(values);
    let var = values.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / values.len() as f64;
    libm::sqrt(var)
}

/// Standard deviation as a percentage of the mean.
pub fn coefficient_of_variation(values: &[f64]) -> Result<f64> {
    let mu = mean(values);
    if !(mu > 0.0) {
        return Err(Error::NonPositiveMean(mu));
    }
    Ok(100.0 * population_stdev(values) / mu)
}

/// Balance-report variant: all-zero series are perfectly balanced.
fn balance_cov(values: &[f64]) -> f64 {
    if values.iter().all(|&x| x == 0.0) {
        0.0
    } else {
        coefficient_of_variation(values).unwrap_or(0.0)
    }
}

/// Global traffic divided by total traffic.
pub fn percentage_global(total_traffic: u64, global_traffic: u64) -> Result<f64> {
    if total_traffic == 0 {
        return Err(Error::ZeroTraffic);
    }
    if global_traffic > total_traffic {
        return Err(Error::InvalidArgument("global traffic exceeds total traffic".into()));
    }
    Ok(global_traffic as f64 / total_traffic as f64)
}

/// Expected global share when each traversal step issues `t_l` local-only
/// actions and `t_pg` actions that turn global with probability equal to the
/// edge-cut fraction.
pub fn predicted_percentage_global(t_pg: u32, t_l: u32, ec_fraction: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&ec_fraction) {
        return Err(Error::InvalidArgument("edge cut fraction must lie in [0, 1]".into()));
    }
    let denom = t_l + t_pg;
    if denom == 0 {
        return Err(Error::InvalidArgument("t_l + t_pg must be positive".into()));
    }
    Ok(f64::from(t_pg) * ec_fraction / f64::from(denom))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub edge_cut_weight: f64,
    pub edge_cut_fraction: f64,
    /// `None` when some partition has zero volume.
    pub conductance: Option<f64>,
    /// `None` for edgeless graphs.
    pub modularity: Option<f64>,
    pub partition_count_dev: u32,
    pub partition_size_stdev: f64,
}

impl QualityReport {
    pub fn compute(view: &UndirectedView, p: &PartitionMap, desired_k: u32) -> Self {
        let cut = edge_cut(view, p);
        QualityReport {
            edge_cut_weight: cut.weight,
            edge_cut_fraction: cut.fraction,
            conductance: conductance(view, p).ok(),
            modularity: modularity(view, p).ok(),
            partition_count_dev: partition_count_dev(p, desired_k),
            partition_size_stdev: partition_size_stdev(p),
        }
    }
}

/// Coefficients of variation (percent) of per-partition loads.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BalanceReport {
    pub cov_vertices: f64,
    pub cov_edges: f64,
    pub cov_traffic: f64,
}

impl BalanceReport {
    pub fn from_loads(vertices: &[f64], edges: &[f64], traffic: &[f64]) -> Self {
        BalanceReport {
            cov_vertices: balance_cov(vertices),
            cov_edges: balance_cov(edges),
            cov_traffic: balance_cov(traffic),
        }
    }
}
