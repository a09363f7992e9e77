//! File formats.

pub mod chaco;
pub mod gml;
pub mod logs;
pub mod partition;
pub mod report;

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use diffpart_core::{Graph, PartitionMap};

pub use chaco::{read_chaco, write_chaco, ChacoHeader};
pub use gml::{read_gml, write_gml, GmlDocument};
pub use logs::{read_dynamism_log, read_operation_log, write_dynamism_log, write_operation_log};
pub use partition::{read_load_state, read_partition_map, write_load_state, write_partition_map};
pub use report::{write_operations_csv, write_partitions_csv, write_quality_csv, write_summary_csv};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Chaco,
    Gml,
}

impl GraphFormat {
    /// `.gml` is GML; anything else is read as Chaco.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("gml") => GraphFormat::Gml,
            _ => GraphFormat::Chaco,
        }
    }
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(Error::file(path))
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(Error::file(dir))?;
    }
    File::create(path).map(BufWriter::new).map_err(Error::file(path))
}

/// Prefixes parse errors with the file they came from.
pub fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", path.display()) },
        e => e,
    })
}

/// Reads a graph, with its partitioning when the file stores one.
pub fn read_graph(path: &Path) -> Result<(Graph, Option<PartitionMap>)> {
    let src = open(path)?;
    in_file(
        path,
        match GraphFormat::from_path(path) {
            GraphFormat::Chaco => read_chaco(src).map(|g| (g, None)),
            GraphFormat::Gml => read_gml(src).map(|d| (d.graph, d.partition)),
        },
    )
}

pub fn write_graph(path: &Path, g: &Graph, partition: Option<&PartitionMap>) -> Result<()> {
    let sink = create(path)?;
    match GraphFormat::from_path(path) {
        GraphFormat::Chaco => write_chaco(g, sink),
        GraphFormat::Gml => write_gml(g, partition, sink),
    }
}
