//! The four experiments: compare partitioning methods (static), degrade a
//! DiDiC partitioning with dynamism (insert), repair each degraded
//! partitioning with one DiDiC iteration (stress), and alternate dynamism
//! with repair (dynamic).
//!
//! A run writes `summary.csv`, `partitions.csv`, `operations.csv` and the
//! resolved `spec.conf` to `<out>/<kind>/`. The evaluation logs, partition
//! maps, DiDiC checkpoints and dynamism logs it used go to `workloads/`,
//! `maps/`, `baseline/` and `dynamism/` under `<out>`, so that runs sharing
//! an output directory reuse each other's checkpoints and dynamism logs.

mod spec;

use std::fs;
use std::path::{Path, PathBuf};

use diffpart_core::datasets::{generate_fs, generate_gis, generate_social, DatasetKind, FsGenSpec, GisGenSpec, SocialGenSpec};
use diffpart_core::didic::{didic_iteration, init_load, repair_iteration, run_didic, DidicConfig, LoadState};
use diffpart_core::emulator::EmulatorHandle;
use diffpart_core::partitioners::{partition_fs_subtrees, partition_gis_longitude, partition_random};
use diffpart_core::rng;
use diffpart_core::workloads::{
    gen_dynamism, gen_ops, DynamismLog, DynamismPolicy, DynamismSpec, Executor, OpPattern, OperationLog, WorkloadSpec,
};
use diffpart_core::{Graph, PartitionMap, UndirectedView};

pub use spec::{
    ChurnSpec, DatasetSource, DatasetSpec, EvalSpec, ExperimentKind, ExperimentSpec, MethodName, DESK_LEVELS, DESK_OPS,
    DESK_VERTICES,
};

use crate::error::{Error, Result};
use crate::io;
use crate::report::{Cell, MetricsReport};

pub fn generate_dataset(kind: DatasetKind, vertices: usize, seed: u64) -> Result<Graph> {
    Ok(match kind {
        DatasetKind::FileSystem => generate_fs(&FsGenSpec { seed, target_vertices: vertices, ..FsGenSpec::default() })?,
        DatasetKind::Gis => generate_gis(&GisGenSpec::with_target(seed, vertices))?.graph,
        DatasetKind::Social => generate_social(&SocialGenSpec { seed, target_vertices: vertices, ..SocialGenSpec::default() })?,
    })
}

pub fn load_dataset(spec: &DatasetSpec) -> Result<(DatasetKind, Graph)> {
    let g = match &spec.source {
        DatasetSource::Generated { vertices, seed } => {
            let kind = spec.kind.ok_or_else(|| Error::config("dataset.kind", "required for generated datasets"))?;
            generate_dataset(kind, *vertices, *seed)?
        }
        DatasetSource::File(path) => io::read_graph(path)?.0,
    };
    let kind = spec
        .kind
        .or_else(|| DatasetKind::detect(&g))
        .ok_or_else(|| Error::config("dataset.kind", "cannot tell the dataset kind from the file; set it"))?;
    Ok((kind, g))
}

/// Evaluation patterns used when none are configured.
pub fn default_patterns(kind: DatasetKind) -> Vec<OpPattern> {
    match kind {
        DatasetKind::FileSystem => vec![OpPattern::FsBfs],
        DatasetKind::Gis => vec![OpPattern::GisAstarShort, OpPattern::GisAstarLong],
        DatasetKind::Social => vec![OpPattern::SocialFoaf],
    }
}

fn pattern_fits(kind: DatasetKind, p: OpPattern) -> bool {
    match p {
        OpPattern::FsBfs => kind == DatasetKind::FileSystem,
        OpPattern::GisAstarShort | OpPattern::GisAstarLong => kind == DatasetKind::Gis,
        OpPattern::SocialFoaf => kind == DatasetKind::Social,
    }
}

fn policy_index(p: DynamismPolicy) -> u64 {
    DynamismPolicy::ALL.iter().position(|&q| q == p).unwrap_or(0) as u64
}

/// Runs `spec`, writing all outputs under `out`, and returns the reports.
/// The CSVs land in [`results_dir`].
pub fn run(spec: &ExperimentSpec, out: &Path) -> Result<Vec<MetricsReport>> {
    fs::create_dir_all(out).map_err(Error::file(out))?;
    let bench = Bench::new(spec, out)?;
    let mut reports = Vec::new();
    for &k in &spec.ks {
        match spec.kind {
            ExperimentKind::Static => bench.run_static(k, &mut reports)?,
            ExperimentKind::Insert => bench.run_insert(k, &mut reports)?,
            ExperimentKind::Stress => bench.run_stress(k, &mut reports)?,
            ExperimentKind::Dynamic => bench.run_dynamic(k, &mut reports)?,
        }
    }
    let dir = results_dir(spec, out);
    let path = |name: &str| dir.join(name);
    io::write_summary_csv(&reports, io::create(&path("summary.csv"))?)?;
    io::write_partitions_csv(&reports, io::create(&path("partitions.csv"))?)?;
    io::write_operations_csv(&reports, io::create(&path("operations.csv"))?)?;
    fs::write(path("spec.conf"), spec.to_conf()).map_err(Error::file(path("spec.conf")))?;
    Ok(reports)
}

pub fn results_dir(spec: &ExperimentSpec, out: &Path) -> PathBuf {
    out.join(spec.kind.as_str())
}

struct Bench<'a> {
    spec: &'a ExperimentSpec,
    out: &'a Path,
    kind: DatasetKind,
    graph: Graph,
    view: UndirectedView,
    exec: Executor,
    /// Evaluation logs, one per pattern.
    logs: Vec<OperationLog>,
}

impl<'a> Bench<'a> {
    fn new(spec: &'a ExperimentSpec, out: &'a Path) -> Result<Self> {
        let (kind, graph) = load_dataset(&spec.dataset)?;
        if kind == DatasetKind::Social && spec.methods.contains(&MethodName::Hardcoded) {
            return Err(Error::config("partition.methods", "the social dataset has no hardcoded partitioning"));
        }
        let mut patterns = if spec.workload.patterns.is_empty() { default_patterns(kind) } else { spec.workload.patterns.clone() };
        if let Some(p) = patterns.iter().find(|p| !pattern_fits(kind, **p)) {
            return Err(Error::config("workload.patterns", format!("{} does not apply to the {} dataset", p.as_str(), kind.as_str())));
        }
        if spec.kind != ExperimentKind::Static {
            // Long routes take too long to replay after every change.
            patterns.retain(|&p| p != OpPattern::GisAstarLong);
            if patterns.is_empty() {
                return Err(Error::config("workload.patterns", "needs a pattern other than GIS_ASTAR_LONG"));
            }
        }
        let mut logs = Vec::new();
        for &p in &patterns {
            let seed = rng::derive(spec.workload.seed, OpPattern::ALL.iter().position(|&q| q == p).unwrap_or(0) as u64);
            let ws = WorkloadSpec { gis_start: spec.workload.gis_start, ..WorkloadSpec::new(p, spec.workload.ops, seed) };
            let log = gen_ops(&graph, &ws)?;
            let path = out.join("workloads").join(format!("{}.log", p.as_str().to_ascii_lowercase()));
            io::write_operation_log(&log, io::create(&path)?)?;
            logs.push(log);
        }
        Ok(Bench { spec, out, kind, view: graph.undirected_view(), exec: Executor::new(&graph), graph, logs })
    }

    fn cell(&self, k: u32, method: &str, log: &OperationLog, policy: Option<DynamismPolicy>, level: f64, stage: &str) -> Cell {
        Cell {
            experiment: self.spec.kind.as_str().into(),
            dataset: self.kind.as_str().into(),
            k,
            method: method.into(),
            pattern: log.pattern().map_or("MIXED", OpPattern::as_str).into(),
            policy: policy.map(|p| p.as_str().into()),
            level,
            stage: stage.into(),
        }
    }

    /// One report per evaluation log.
    fn measure_all(
        &self,
        k: u32,
        method: &str,
        p: &PartitionMap,
        policy: Option<DynamismPolicy>,
        level: f64,
        stage: &str,
        reports: &mut Vec<MetricsReport>,
    ) -> Result<()> {
        for log in &self.logs {
            let cell = self.cell(k, method, log, policy, level, stage);
            reports.push(MetricsReport::measure(cell, &self.graph, &self.view, &self.exec, p, log)?);
        }
        Ok(())
    }

    fn didic_config(&self, k: u32) -> DidicConfig {
        DidicConfig { k, seed: rng::derive(self.spec.didic.seed, u64::from(k)), ..self.spec.didic.clone() }
    }

    fn random_map(&self, k: u32) -> Result<PartitionMap> {
        Ok(partition_random(self.graph.num_vertices(), k, rng::derive(self.spec.partition_seed, u64::from(k)))?)
    }

    /// DiDiC from the random map, loaded from the checkpoint in `baseline/`
    /// when it was computed for the same graph and configuration.
    fn baseline(&self, k: u32) -> Result<(PartitionMap, LoadState)> {
        let dir = self.out.join("baseline");
        let stem = dir.join(format!("didic_k{k}"));
        let with = |ext: &str| PathBuf::from(format!("{}.{ext}", stem.display()));
        let cfg = self.didic_config(k);
        let key = format!(
            "graph={:016x} init_seed={} config={:?}\n",
            self.graph.structure_hash(),
            rng::derive(self.spec.partition_seed, u64::from(k)),
            cfg
        );
        if fs::read_to_string(with("key")).is_ok_and(|stored| stored == key) {
            let p = io::in_file(&with("map"), io::read_partition_map(io::open(&with("map"))?))?;
            let s = io::in_file(&with("loads.csv"), io::read_load_state(io::open(&with("loads.csv"))?, k as usize))?;
            if p.k() == k && p.len() == self.graph.num_vertices() && s.num_vertices() == p.len() {
                return Ok((p, s));
            }
        }
        let (p, s) = run_didic(&self.view, &self.random_map(k)?, &cfg)?;
        io::write_partition_map(&p, io::create(&with("map"))?)?;
        io::write_load_state(&s, io::create(&with("loads.csv"))?)?;
        fs::write(with("key"), key).map_err(Error::file(with("key")))?;
        Ok((p, s))
    }

    /// The interleaved read workload for LEAST_TRAFFIC.
    fn churn_workload(&self) -> (&Executor, &OperationLog) {
        (&self.exec, &self.logs[0])
    }

    /// The dynamism log for a cell, read from `dynamism/` when an earlier
    /// run left one with the same parameters, else generated and saved.
    fn churn_log(&self, k: u32, policy: DynamismPolicy, level: f64, baseline: &PartitionMap) -> Result<DynamismLog> {
        let d = &self.spec.dynamism;
        let seed = rng::derive(rng::derive(rng::derive(d.seed, u64::from(k)), policy_index(policy)), level.to_bits());
        let path = self.out.join("dynamism").join(format!("k{k}_{}_{level}.log", policy.as_str().to_ascii_lowercase()));
        let dspec = DynamismSpec::new(policy, level, seed);
        if path.exists() {
            let log = io::in_file(&path, io::read_dynamism_log(io::open(&path)?))?;
            if log.policy == policy && log.level == level && log.seed == seed && log.len() == dspec.count(self.graph.num_vertices()) {
                return Ok(log);
            }
        }
        let mut h = EmulatorHandle::open(&self.graph, baseline.clone())?;
        let log = gen_dynamism(&mut h, &dspec, Some(self.churn_workload()))?;
        io::write_dynamism_log(&log, io::create(&path)?)?;
        Ok(log)
    }

    fn apply(&self, p: &PartitionMap, log: &[diffpart_core::workloads::DynamismRecord]) -> Result<PartitionMap> {
        let mut p = p.clone();
        for r in log {
            p.set(r.vertex, r.target)?;
        }
        Ok(p)
    }

    /// One DiDiC iteration on `damaged`, which differs from the partitioning
    /// `state` belongs to by `moves`.
    fn repair(
        &self,
        k: u32,
        state: LoadState,
        damaged: PartitionMap,
        moves: &[diffpart_core::workloads::DynamismRecord],
    ) -> Result<(LoadState, PartitionMap)> {
        let cfg = self.didic_config(k);
        if self.spec.reinit_loads {
            let fresh = init_load(self.graph.num_vertices(), &damaged, k)?;
            Ok(didic_iteration(&self.view, fresh, damaged, &cfg, &[])?)
        } else {
            Ok(repair_iteration(&self.view, state, damaged, &cfg, &DynamismLog::changes(moves))?)
        }
    }

    fn run_static(&self, k: u32, reports: &mut Vec<MetricsReport>) -> Result<()> {
        for &m in &self.spec.methods {
            let p = match m {
                MethodName::Random => self.random_map(k)?,
                MethodName::Didic => self.baseline(k)?.0,
                MethodName::Hardcoded => match self.kind {
                    DatasetKind::FileSystem => partition_fs_subtrees(&self.graph, k)?,
                    DatasetKind::Gis => partition_gis_longitude(&self.graph, k)?,
                    DatasetKind::Social => unreachable!("rejected when the bench is built"),
                },
            };
            let path = self.out.join("maps").join(format!("{}_k{k}.map", m.as_str()));
            io::write_partition_map(&p, io::create(&path)?)?;
            self.measure_all(k, m.as_str(), &p, None, 0.0, "partitioned", reports)?;
        }
        Ok(())
    }

    fn run_insert(&self, k: u32, reports: &mut Vec<MetricsReport>) -> Result<()> {
        let (base, _) = self.baseline(k)?;
        self.measure_all(k, "didic", &base, None, 0.0, "baseline", reports)?;
        for &policy in &self.spec.dynamism.policies {
            for &level in &self.spec.dynamism.levels {
                let log = self.churn_log(k, policy, level, &base)?;
                let damaged = self.apply(&base, &log.records)?;
                self.measure_all(k, "didic", &damaged, Some(policy), level, "inserted", reports)?;
            }
        }
        Ok(())
    }

    fn run_stress(&self, k: u32, reports: &mut Vec<MetricsReport>) -> Result<()> {
        let (base, state) = self.baseline(k)?;
        self.measure_all(k, "didic", &base, None, 0.0, "baseline", reports)?;
        for &policy in &self.spec.dynamism.policies {
            for &level in &self.spec.dynamism.levels {
                let log = self.churn_log(k, policy, level, &base)?;
                let damaged = self.apply(&base, &log.records)?;
                self.measure_all(k, "didic", &damaged, Some(policy), level, "damaged", reports)?;
                let (_, repaired) = self.repair(k, state.clone(), damaged, &log.records)?;
                self.measure_all(k, "didic", &repaired, Some(policy), level, "repaired", reports)?;
            }
        }
        Ok(())
    }

    fn run_dynamic(&self, k: u32, reports: &mut Vec<MetricsReport>) -> Result<()> {
        let (base, base_state) = self.baseline(k)?;
        let d = &self.spec.dynamism;
        let n = self.graph.num_vertices().max(1) as f64;
        for &policy in &d.policies {
            let log = self.churn_log(k, policy, d.dynamic_level, &base)?;
            self.measure_all(k, "didic", &base, Some(policy), 0.0, "cycle0", reports)?;
            let (mut p, mut state) = (base.clone(), base_state.clone());
            let mut applied = 0;
            for (i, slice) in log.slices(d.cycles).into_iter().enumerate() {
                let damaged = self.apply(&p, slice)?;
                (state, p) = self.repair(k, state, damaged, slice)?;
                applied += slice.len();
                self.measure_all(k, "didic", &p, Some(policy), applied as f64 / n, &format!("cycle{}", i + 1), reports)?;
            }
        }
        Ok(())
    }
}
