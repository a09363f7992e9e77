//! CSV series written by the experiments.
//!
//! `summary.csv` has one row per report:
//!
//! | column | meaning |
//! |---|---|
//! | experiment, dataset, k, method, pattern, policy, level, stage | the cell |
//! | edge_cut_weight, edge_cut | cut weight and its fraction of the total |
//! | conductance, modularity | empty when undefined |
//! | partition_count_dev, partition_size_stdev | |
//! | cov_vertices, cov_edges, cov_traffic | coefficients of variation in percent |
//! | local_traffic, global_traffic, pct_global | workload traffic |
//!
//! `partitions.csv` has one row per partition per report with the emulator
//! counters, and `operations.csv` one row per replayed operation with its
//! traffic, its global fraction and, in `sorted_global_fraction`, the
//! fractions of the whole report sorted ascending.

use std::io::Write;

use diffpart_core::metrics::QualityReport;

use crate::error::Result;
use crate::report::{Cell, MetricsReport};

const CELL_HEADER: [&str; 8] = ["experiment", "dataset", "k", "method", "pattern", "policy", "level", "stage"];
const QUALITY_HEADER: [&str; 6] =
    ["edge_cut_weight", "edge_cut", "conductance", "modularity", "partition_count_dev", "partition_size_stdev"];

fn opt(x: Option<f64>) -> String {
    x.map(|x| x.to_string()).unwrap_or_default()
}

fn cell_fields(c: &Cell) -> Vec<String> {
    vec![
        c.experiment.clone(),
        c.dataset.clone(),
        c.k.to_string(),
        c.method.clone(),
        c.pattern.clone(),
        c.policy.clone().unwrap_or_default(),
        c.level.to_string(),
        c.stage.clone(),
    ]
}

fn quality_fields(q: &QualityReport) -> Vec<String> {
    vec![
        q.edge_cut_weight.to_string(),
        q.edge_cut_fraction.to_string(),
        opt(q.conductance),
        opt(q.modularity),
        q.partition_count_dev.to_string(),
        q.partition_size_stdev.to_string(),
    ]
}

fn write_rows<W: Write>(sink: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn header(extra: &[&'static str], quality: bool) -> Vec<&'static str> {
    let mut h = CELL_HEADER.to_vec();
    if quality {
        h.extend(QUALITY_HEADER);
    }
    h.extend(extra);
    h
}

pub fn write_summary_csv<W: Write>(reports: &[MetricsReport], sink: W) -> Result<()> {
    let head = header(&["cov_vertices", "cov_edges", "cov_traffic", "local_traffic", "global_traffic", "pct_global"], true);
    let rows = reports.iter().map(|r| {
        let mut f = cell_fields(&r.cell);
        f.extend(quality_fields(&r.quality));
        f.extend([
            r.balance.cov_vertices.to_string(),
            r.balance.cov_edges.to_string(),
            r.balance.cov_traffic.to_string(),
            r.local_traffic.to_string(),
            r.global_traffic.to_string(),
            opt(r.pct_global),
        ]);
        f
    });
    write_rows(sink, &head, rows)
}

pub fn write_partitions_csv<W: Write>(reports: &[MetricsReport], sink: W) -> Result<()> {
    let head = header(&["partition", "vertices", "edges", "local_traffic", "global_traffic"], false);
    let rows = reports.iter().flat_map(|r| {
        r.instances.iter().map(move |i| {
            let mut f = cell_fields(&r.cell);
            f.extend([
                i.pid.0.to_string(),
                i.num_vertices.to_string(),
                i.num_edges.to_string(),
                i.local_traffic.to_string(),
                i.global_traffic.to_string(),
            ]);
            f
        })
    });
    write_rows(sink, &head, rows)
}

fn fraction(local: u64, global: u64) -> f64 {
    if local + global == 0 {
        0.0
    } else {
        global as f64 / (local + global) as f64
    }
}

pub fn write_operations_csv<W: Write>(reports: &[MetricsReport], sink: W) -> Result<()> {
    let head = header(&["index", "local_traffic", "global_traffic", "global_fraction", "sorted_global_fraction"], false);
    let rows = reports.iter().flat_map(|r| {
        let mut sorted: Vec<f64> = r.ops.iter().map(|o| fraction(o.local, o.global)).collect();
        sorted.sort_by(f64::total_cmp);
        let cell = cell_fields(&r.cell);
        r.ops.iter().zip(sorted).enumerate().map(move |(index, (o, s))| {
            let mut f = cell.clone();
            f.extend([
                index.to_string(),
                o.local.to_string(),
                o.global.to_string(),
                fraction(o.local, o.global).to_string(),
                s.to_string(),
            ]);
            f
        })
    });
    write_rows(sink, &head, rows)
}

/// One-row quality table for the `metrics` command.
pub fn write_quality_csv<W: Write>(q: &QualityReport, sink: W) -> Result<()> {
    write_rows(sink, &QUALITY_HEADER, [quality_fields(q)])
}
