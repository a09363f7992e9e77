use std::fmt::Write as _;
use std::path::PathBuf;

use diffpart_core::datasets::DatasetKind;
use diffpart_core::didic::{DidicConfig, FlowScale};
use diffpart_core::rng;
use diffpart_core::workloads::{DynamismPolicy, GisStartWeighting, OpPattern};

use crate::config::Config;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Static,
    Insert,
    Stress,
    Dynamic,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Static => "static",
            ExperimentKind::Insert => "insert",
            ExperimentKind::Stress => "stress",
            ExperimentKind::Dynamic => "dynamic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [ExperimentKind::Static, ExperimentKind::Insert, ExperimentKind::Stress, ExperimentKind::Dynamic]
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodName {
    Random,
    Didic,
    /// The dataset-specific hand-made partitioning.
    Hardcoded,
}

impl MethodName {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::Random => "random",
            MethodName::Didic => "didic",
            MethodName::Hardcoded => "hardcoded",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [MethodName::Random, MethodName::Didic, MethodName::Hardcoded].into_iter().find(|m| m.as_str().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Generated { vertices: usize, seed: u64 },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    /// Required for generated graphs; detected from vertex kinds for files
    /// when absent.
    pub kind: Option<DatasetKind>,
    pub source: DatasetSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalSpec {
    /// Defaults to the dataset's patterns when empty.
    pub patterns: Vec<OpPattern>,
    pub ops: usize,
    pub seed: u64,
    pub gis_start: GisStartWeighting,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChurnSpec {
    pub policies: Vec<DynamismPolicy>,
    pub levels: Vec<f64>,
    pub seed: u64,
    /// Total level of the log the dynamic experiment splits into cycles.
    pub dynamic_level: f64,
    pub cycles: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub dataset: DatasetSpec,
    pub ks: Vec<u32>,
    pub methods: Vec<MethodName>,
    pub partition_seed: u64,
    pub workload: EvalSpec,
    pub dynamism: ChurnSpec,
    /// `k` is overwritten per cell.
    pub didic: DidicConfig,
    /// Repair from loads re-initialised on the damaged partitioning instead
    /// of the persisted ones.
    pub reinit_loads: bool,
}

pub const DESK_VERTICES: usize = 10_000;
pub const DESK_OPS: usize = 2_000;
pub const DESK_LEVELS: [f64; 5] = [0.01, 0.02, 0.05, 0.10, 0.25];

fn take_enum<T>(c: &mut Config, key: &str, parse: fn(&str) -> Option<T>) -> Result<Option<T>> {
    c.take::<String>(key)?.map(|s| parse(&s).ok_or_else(|| Error::config(key, format!("unknown value `{s}`")))).transpose()
}

fn take_enum_list<T>(c: &mut Config, key: &str, parse: fn(&str) -> Option<T>) -> Result<Option<Vec<T>>> {
    c.take_list::<String>(key)?
        .map(|items| {
            items.iter().map(|s| parse(s).ok_or_else(|| Error::config(key, format!("unknown value `{s}`")))).collect()
        })
        .transpose()
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

impl ExperimentSpec {
    /// Desk-scale defaults for `kind` on the generated file-system dataset.
    pub fn defaults(kind: ExperimentKind, seed: u64) -> Self {
        let mut c = Config::default();
        c.set("experiment.kind", kind.as_str());
        c.set("experiment.seed", seed);
        Self::from_config(c).expect("defaults are valid")
    }

    /// Builds a spec from `c`, filling every missing key with its default.
    /// Sub-seeds default to streams derived from `experiment.seed`.
    pub fn from_config(mut c: Config) -> Result<Self> {
        let kind = take_enum(&mut c, "experiment.kind", ExperimentKind::parse)?
            .ok_or_else(|| Error::config("experiment.kind", "missing"))?;
        let seed = c.take_or("experiment.seed", 1u64)?;
        let sub = |stream| rng::derive(seed, stream);
        let reinit_loads = c.take_or("experiment.reinit_loads", false)?;

        let dataset_kind = take_enum(&mut c, "dataset.kind", DatasetKind::parse)?;
        let path: Option<PathBuf> = c.take("dataset.path")?;
        let vertices = c.take::<usize>("dataset.vertices")?;
        let dataset_seed = c.take::<u64>("dataset.seed")?;
        let source = match path {
            Some(p) => {
                if vertices.is_some() || dataset_seed.is_some() {
                    return Err(Error::config("dataset.path", "cannot be combined with dataset.vertices or dataset.seed"));
                }
                DatasetSource::File(p)
            }
            None => DatasetSource::Generated { vertices: vertices.unwrap_or(DESK_VERTICES), seed: dataset_seed.unwrap_or(sub(1)) },
        };
        let dataset = DatasetSpec {
            kind: match (&source, dataset_kind) {
                (DatasetSource::Generated { .. }, None) => Some(DatasetKind::FileSystem),
                (_, k) => k,
            },
            source,
        };

        let ks = c.take_list::<u32>("partition.k")?.unwrap_or_else(|| vec![2, 4]);
        if ks.is_empty() || ks.contains(&0) {
            return Err(Error::config("partition.k", "needs one or more partition counts of at least 1"));
        }
        let default_methods = if kind != ExperimentKind::Static {
            vec![MethodName::Didic]
        } else if dataset.kind == Some(DatasetKind::Social) {
            vec![MethodName::Random, MethodName::Didic]
        } else {
            vec![MethodName::Random, MethodName::Didic, MethodName::Hardcoded]
        };
        let methods = take_enum_list(&mut c, "partition.methods", MethodName::parse)?.unwrap_or(default_methods);
        if methods.is_empty() {
            return Err(Error::config("partition.methods", "needs at least one method"));
        }
        if kind != ExperimentKind::Static && methods != [MethodName::Didic] {
            return Err(Error::config("partition.methods", "only didic applies to this experiment"));
        }
        if dataset.kind == Some(DatasetKind::Social) && methods.contains(&MethodName::Hardcoded) {
            return Err(Error::config("partition.methods", "the social dataset has no hardcoded partitioning"));
        }
        let partition_seed = c.take_or("partition.seed", sub(3))?;

        let workload = EvalSpec {
            patterns: take_enum_list(&mut c, "workload.patterns", OpPattern::parse)?.unwrap_or_default(),
            ops: c.take_or("workload.ops", DESK_OPS)?,
            seed: c.take_or("workload.seed", sub(2))?,
            gis_start: take_enum(&mut c, "workload.gis_start", GisStartWeighting::parse)?.unwrap_or(GisStartWeighting::InverseDistance),
        };
        if workload.ops == 0 {
            return Err(Error::config("workload.ops", "must be at least 1"));
        }

        let dynamism = ChurnSpec {
            policies: take_enum_list(&mut c, "dynamism.policies", DynamismPolicy::parse)?.unwrap_or_else(|| DynamismPolicy::ALL.to_vec()),
            levels: c.take_list::<f64>("dynamism.levels")?.unwrap_or_else(|| DESK_LEVELS.to_vec()),
            seed: c.take_or("dynamism.seed", sub(5))?,
            dynamic_level: c.take_or("dynamism.dynamic_level", 0.25)?,
            cycles: c.take_or("dynamism.cycles", 5usize)?,
        };
        if let Some(l) = dynamism.levels.iter().chain([&dynamism.dynamic_level]).find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::config("dynamism.levels", format!("level {l} outside [0, 1]")));
        }
        if dynamism.cycles == 0 {
            return Err(Error::config("dynamism.cycles", "must be at least 1"));
        }
        if kind != ExperimentKind::Static && dynamism.policies.is_empty() {
            return Err(Error::config("dynamism.policies", "needs at least one policy"));
        }

        let base = DidicConfig::default();
        let flow_scale = match c.take::<String>("didic.flow_scale")? {
            None => base.flow_scale,
            Some(s) if s == "degree" => FlowScale::InvMaxDegree,
            Some(s) => FlowScale::Constant(s.parse().map_err(|_| Error::config("didic.flow_scale", "expected `degree` or a number"))?),
        };
        let didic = DidicConfig {
            k: ks[0],
            iterations: c.take_or("didic.iterations", base.iterations)?,
            primary_steps: c.take_or("didic.psi", base.primary_steps)?,
            secondary_steps: c.take_or("didic.rho", base.secondary_steps)?,
            benefit_high: c.take_or("didic.benefit_high", base.benefit_high)?,
            benefit_low: c.take_or("didic.benefit_low", base.benefit_low)?,
            flow_scale,
            seed: c.take_or("didic.seed", sub(4))?,
        };
        didic.validate().map_err(|e| {
            let msg = e.to_string();
            let key = msg.split_whitespace().find(|w| w.starts_with("didic.")).unwrap_or("didic").to_owned();
            Error::config(key, msg)
        })?;
        c.finish()?;
        Ok(ExperimentSpec { kind, seed, dataset, ks, methods, partition_seed, workload, dynamism, didic, reinit_loads })
    }

    /// Every key with its resolved value, in the format `from_config` reads.
    pub fn to_conf(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| writeln!(s, "{k} = {v}").unwrap();
        put("experiment.kind", self.kind.as_str().into());
        put("experiment.seed", self.seed.to_string());
        put("experiment.reinit_loads", self.reinit_loads.to_string());
        if let Some(k) = self.dataset.kind {
            put("dataset.kind", k.as_str().into());
        }
        match &self.dataset.source {
            DatasetSource::Generated { vertices, seed } => {
                put("dataset.vertices", vertices.to_string());
                put("dataset.seed", seed.to_string());
            }
            DatasetSource::File(p) => put("dataset.path", p.display().to_string()),
        }
        put("partition.k", join(&self.ks, u32::to_string));
        put("partition.methods", join(&self.methods, |m| m.as_str().into()));
        put("partition.seed", self.partition_seed.to_string());
        put("workload.patterns", join(&self.workload.patterns, |p| p.as_str().into()));
        put("workload.ops", self.workload.ops.to_string());
        put("workload.seed", self.workload.seed.to_string());
        put("workload.gis_start", self.workload.gis_start.as_str().into());
        put("dynamism.policies", join(&self.dynamism.policies, |p| p.as_str().into()));
        put("dynamism.levels", join(&self.dynamism.levels, f64::to_string));
        put("dynamism.seed", self.dynamism.seed.to_string());
        put("dynamism.dynamic_level", self.dynamism.dynamic_level.to_string());
        put("dynamism.cycles", self.dynamism.cycles.to_string());
        put("didic.iterations", self.didic.iterations.to_string());
        put("didic.psi", self.didic.primary_steps.to_string());
        put("didic.rho", self.didic.secondary_steps.to_string());
        put("didic.benefit_high", self.didic.benefit_high.to_string());
        put("didic.benefit_low", self.didic.benefit_low.to_string());
        put(
            "didic.flow_scale",
            match self.didic.flow_scale {
                FlowScale::InvMaxDegree => "degree".into(),
                FlowScale::Constant(c) => c.to_string(),
            },
        );
        put("didic.seed", self.didic.seed.to_string());
        s
    }
}
