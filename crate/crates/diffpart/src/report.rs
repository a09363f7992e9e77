//! Measurements of one partitioning under one workload.

use diffpart_core::emulator::{EmulatorHandle, InstanceInfo};
use diffpart_core::metrics::{self, BalanceReport, QualityReport};
use diffpart_core::workloads::{Executor, OpTraffic, OperationLog};
use diffpart_core::{Graph, PartitionMap, UndirectedView};

use crate::error::Result;

/// Identifies one cell of an experiment grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub experiment: String,
    pub dataset: String,
    pub k: u32,
    pub method: String,
    pub pattern: String,
    pub policy: Option<String>,
    pub level: f64,
    pub stage: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub cell: Cell,
    pub quality: QualityReport,
    pub balance: BalanceReport,
    pub instances: Vec<InstanceInfo>,
    pub local_traffic: u64,
    pub global_traffic: u64,
    /// `None` when the workload produced no traffic.
    pub pct_global: Option<f64>,
    /// Traffic of each operation in replay order.
    pub ops: Vec<OpTraffic>,
}

impl MetricsReport {
    /// Replays `log` on a fresh emulator over `p` and collects every metric.
    pub fn measure(
        cell: Cell,
        g: &Graph,
        view: &UndirectedView,
        exec: &Executor,
        p: &PartitionMap,
        log: &OperationLog,
    ) -> Result<Self> {
        let mut h = EmulatorHandle::open(g, p.clone())?;
        let ops = exec.replay(&mut h, &log.ops)?;
        let instances = h.snapshot_all();
        let col = |f: fn(&InstanceInfo) -> u64| instances.iter().map(|i| f(i) as f64).collect::<Vec<_>>();
        let balance = BalanceReport::from_loads(&col(|i| i.num_vertices), &col(|i| i.num_edges), &col(|i| i.total_traffic()));
        let (local, global) = (h.total_local(), h.total_global());
        Ok(MetricsReport {
            quality: QualityReport::compute(view, p, cell.k),
            cell,
            balance,
            instances,
            local_traffic: local,
            global_traffic: global,
            pct_global: metrics::percentage_global(local + global, global).ok(),
            ops,
        })
    }
}
