//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffpart_core::datasets::DatasetKind;
use diffpart_core::didic::{run_didic, DidicConfig};
use diffpart_core::emulator::EmulatorHandle;
use diffpart_core::metrics::QualityReport;
use diffpart_core::partitioners::{partition_fs_subtrees, partition_gis_longitude, partition_random};
use diffpart_core::workloads::{gen_ops, Executor, GisStartWeighting, OpPattern, WorkloadSpec};
use diffpart_core::Graph;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentKind, ExperimentSpec};
use crate::io;
use crate::report::{Cell, MetricsReport};

#[derive(Debug, Parser)]
#[command(name = "diffpart", version, about = "Graph partitioning experiments with DiDiC and a partitioned-database emulator")]
struct Cli {
    /// Seed for every random choice of the command.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file or directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `section.key = value` file with dataset and experiment settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset as Chaco, or GML when `--out` ends in `.gml`.
    Generate {
        #[arg(value_enum)]
        kind: Option<DatasetArg>,
        #[arg(long)]
        vertices: Option<usize>,
    },
    /// Partition a graph and write the partition map.
    Partition {
        #[arg(value_enum)]
        method: MethodArg,
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        k: u32,
        /// DiDiC iterations.
        #[arg(long, default_value_t = 100)]
        iterations: u32,
        /// Also write DiDiC's final loads as a CSV checkpoint.
        #[arg(long)]
        loads: Option<PathBuf>,
    },
    /// Partition-quality metrics of a partition map as CSV.
    Metrics {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Desired partition count; defaults to the map's.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Generate or replay operation logs.
    Workload {
        #[command(subcommand)]
        action: WorkloadCommand,
    },
    /// Run an experiment and write its CSV outputs.
    Experiment {
        #[arg(value_enum)]
        kind: KindArg,
        /// Comma-separated partition counts.
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
        /// Repair from loads re-initialised on the damaged partitioning.
        #[arg(long)]
        reinit_loads: bool,
    },
}

#[derive(Debug, Subcommand)]
enum WorkloadCommand {
    Gen {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = experiments::DESK_OPS)]
        ops: usize,
        /// GIS start weighting: inverse or distance.
        #[arg(long, default_value = "inverse")]
        gis_start: String,
    },
    Replay {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long)]
        log: PathBuf,
    },
}

#[derive(Debug, Args)]
struct GraphArg {
    /// Graph file, GML when it ends in `.gml`, else Chaco.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DatasetArg {
    Fs,
    Gis,
    Social,
}

impl From<DatasetArg> for DatasetKind {
    fn from(a: DatasetArg) -> Self {
        match a {
            DatasetArg::Fs => DatasetKind::FileSystem,
            DatasetArg::Gis => DatasetKind::Gis,
            DatasetArg::Social => DatasetKind::Social,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Random,
    Didic,
    Hardcoded,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Static,
    Insert,
    Stress,
    Dynamic,
}

impl From<KindArg> for ExperimentKind {
    fn from(a: KindArg) -> Self {
        match a {
            KindArg::Static => ExperimentKind::Static,
            KindArg::Insert => ExperimentKind::Insert,
            KindArg::Stress => ExperimentKind::Stress,
            KindArg::Dynamic => ExperimentKind::Dynamic,
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code:
/// 0 on success, 1 for usage errors, 2 for invalid specifications and 3 for
/// runtime failures.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(Error::file(path))?;
    Config::parse(&text)
}

fn no_config(cli_config: &Option<PathBuf>, command: &str) -> Result<()> {
    match cli_config {
        Some(_) => Err(Error::config("--config", format!("not used by `{command}`"))),
        None => Ok(()),
    }
}

/// Writes to `--out`, or to stdout when it is absent.
fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut sink = io::create(path)?;
            f(&mut sink)?;
            sink.flush().map_err(Error::file(path))?;
            Ok(())
        }
        None => f(stdout),
    }
}

fn load_partition(g: &Graph, stored: Option<diffpart_core::PartitionMap>, path: &Option<PathBuf>) -> Result<diffpart_core::PartitionMap> {
    let p = match path {
        Some(path) => io::in_file(path, io::read_partition_map(io::open(path)?))?,
        None => stored.ok_or_else(|| Error::config("--partition", "required unless the graph file stores partitions"))?,
    };
    p.check_covers(g.num_vertices())?;
    Ok(p)
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let seed = cli.seed.unwrap_or(1);
    match cli.command {
        Command::Generate { kind, vertices } => {
            let mut c = match &cli.config {
                Some(path) => read_config(path)?,
                None => Config::default(),
            };
            let from_file = c.take::<String>("dataset.kind")?;
            let kind = match (kind, from_file) {
                (Some(k), _) => k.into(),
                (None, Some(s)) => DatasetKind::parse(&s).ok_or_else(|| Error::config("dataset.kind", format!("unknown value `{s}`")))?,
                (None, None) => return Err(Error::config("dataset.kind", "give a dataset kind")),
            };
            let vertices = match vertices {
                Some(v) => v,
                None => c.take_or("dataset.vertices", experiments::DESK_VERTICES)?,
            };
            let seed = match cli.seed {
                Some(s) => s,
                None => c.take_or("dataset.seed", 1)?,
            };
            let g = experiments::generate_dataset(kind, vertices, seed)?;
            let out = cli.out.ok_or_else(|| Error::config("--out", "generate needs an output file"))?;
            io::write_graph(&out, &g, None)?;
            writeln!(stdout, "{} vertices, {} edges -> {}", g.num_vertices(), g.num_edges(), out.display())?;
        }
        Command::Partition { method, graph, k, iterations, loads } => {
            no_config(&cli.config, "partition")?;
            if k == 0 {
                return Err(Error::config("--k", "must be at least 1"));
            }
            let (g, _) = io::read_graph(&graph.graph)?;
            let p = match method {
                MethodArg::Random => partition_random(g.num_vertices(), k, seed)?,
                MethodArg::Hardcoded => match DatasetKind::detect(&g) {
                    Some(DatasetKind::FileSystem) => partition_fs_subtrees(&g, k)?,
                    Some(DatasetKind::Gis) => partition_gis_longitude(&g, k)?,
                    _ => return Err(Error::config("method", "hardcoded partitioning needs a file-system or GIS graph")),
                },
                MethodArg::Didic => {
                    let view = g.undirected_view();
                    let cfg = DidicConfig { iterations, seed, ..DidicConfig::with_k(k) };
                    let (p, state) = run_didic(&view, &partition_random(g.num_vertices(), k, seed)?, &cfg)?;
                    if let Some(path) = &loads {
                        io::write_load_state(&state, io::create(path)?)?;
                    }
                    p
                }
            };
            emit(&cli.out, stdout, |w| io::write_partition_map(&p, w))?;
        }
        Command::Metrics { graph, partition, k } => {
            no_config(&cli.config, "metrics")?;
            let (g, stored) = io::read_graph(&graph.graph)?;
            let p = load_partition(&g, stored, &partition)?;
            let q = QualityReport::compute(&g.undirected_view(), &p, k.unwrap_or(p.k()));
            emit(&cli.out, stdout, |w| io::write_quality_csv(&q, w))?;
        }
        Command::Workload { action: WorkloadCommand::Gen { graph, pattern, ops, gis_start } } => {
            no_config(&cli.config, "workload gen")?;
            let p = OpPattern::parse(&pattern).ok_or_else(|| Error::config("--pattern", format!("unknown pattern `{pattern}`")))?;
            let gis_start =
                GisStartWeighting::parse(&gis_start).ok_or_else(|| Error::config("--gis-start", format!("unknown value `{gis_start}`")))?;
            let (g, _) = io::read_graph(&graph.graph)?;
            let log = gen_ops(&g, &WorkloadSpec { gis_start, ..WorkloadSpec::new(p, ops, seed) })?;
            emit(&cli.out, stdout, |w| io::write_operation_log(&log, w))?;
        }
        Command::Workload { action: WorkloadCommand::Replay { graph, partition, log } } => {
            no_config(&cli.config, "workload replay")?;
            let (g, stored) = io::read_graph(&graph.graph)?;
            let p = load_partition(&g, stored, &partition)?;
            let ops = io::in_file(&log, io::read_operation_log(io::open(&log)?))?;
            if let Some(op) = ops.ops.iter().find(|o| !g.contains_vertex(o.start) || o.end.is_some_and(|e| !g.contains_vertex(e))) {
                return Err(diffpart_core::Error::InvalidArgument(format!("operation {} names a vertex outside the graph", op.seq)).into());
            }
            // Validates the map against the graph before replaying.
            EmulatorHandle::open(&g, p.clone())?;
            let cell = Cell {
                experiment: "replay".into(),
                dataset: DatasetKind::detect(&g).map_or("unknown", DatasetKind::as_str).into(),
                k: p.k(),
                method: "given".into(),
                pattern: ops.pattern().map_or("MIXED", OpPattern::as_str).into(),
                policy: None,
                level: 0.0,
                stage: "replayed".into(),
            };
            let report = MetricsReport::measure(cell, &g, &g.undirected_view(), &Executor::new(&g), &p, &ops)?;
            let reports = [report];
            match &cli.out {
                Some(dir) => {
                    io::write_summary_csv(&reports, io::create(&dir.join("summary.csv"))?)?;
                    io::write_partitions_csv(&reports, io::create(&dir.join("partitions.csv"))?)?;
                    io::write_operations_csv(&reports, io::create(&dir.join("operations.csv"))?)?;
                }
                None => io::write_summary_csv(&reports, &mut *stdout)?,
            }
        }
        Command::Experiment { kind, k, reinit_loads } => {
            let kind = ExperimentKind::from(kind);
            let mut c = match &cli.config {
                Some(path) => read_config(path)?,
                None => Config::default(),
            };
            match c.take::<String>("experiment.kind")? {
                Some(s) if ExperimentKind::parse(&s) != Some(kind) => {
                    return Err(Error::config("experiment.kind", format!("`{s}` conflicts with `experiment {}`", kind.as_str())));
                }
                _ => c.set("experiment.kind", kind.as_str()),
            }
            if let Some(s) = cli.seed {
                c.set("experiment.seed", s);
            }
            if !k.is_empty() {
                c.set("partition.k", k.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
            }
            if reinit_loads {
                c.set("experiment.reinit_loads", true);
            }
            let spec = ExperimentSpec::from_config(c)?;
            let out = cli.out.unwrap_or_else(|| PathBuf::from("results"));
            let reports = experiments::run(&spec, &out)?;
            writeln!(stdout, "{} reports -> {}", reports.len(), out.display())?;
        }
    }
    Ok(())
}
