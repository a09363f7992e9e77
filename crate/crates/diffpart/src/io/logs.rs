//! Operation and dynamism logs.
//!
//! Both are line oriented. An optional `# key=value ...` header records the
//! generating seed; other `#` lines are comments. Operation lines are
//! `seq KIND start [end]`, dynamism lines `seq vertex target`.

use std::io::{BufRead, Write};

use diffpart_core::workloads::{DynamismLog, DynamismPolicy, DynamismRecord, OpPattern, Operation, OperationLog};
use diffpart_core::{PartitionId, VertexId};

use crate::error::{Error, Result};

fn header_fields(line: &str) -> Option<Vec<(&str, &str)>> {
    let rest = line.strip_prefix('#')?;
    let fields: Option<Vec<_>> = rest.split_whitespace().map(|t| t.split_once('=')).collect();
    fields.filter(|f| !f.is_empty())
}

fn num<T: std::str::FromStr>(t: &str, what: &str, line: usize) -> Result<T> {
    t.parse().map_err(|_| Error::parse(line, format!("bad {what} `{t}`")))
}

pub fn write_operation_log<W: Write>(log: &OperationLog, mut sink: W) -> Result<()> {
    let mut out = String::new();
    if let Some(seed) = log.seed {
        out.push_str(&format!("# seed={seed}"));
        if let Some(p) = log.pattern() {
            out.push_str(&format!(" pattern={}", p.as_str()));
        }
        out.push('\n');
    }
    for op in &log.ops {
        out.push_str(&format!("{} {} {}", op.seq, op.pattern.as_str(), op.start.0));
        if let Some(end) = op.end {
            out.push_str(&format!(" {}", end.0));
        }
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(())
}

pub fn read_operation_log<R: BufRead>(source: R) -> Result<OperationLog> {
    let mut log = OperationLog::default();
    for (i, line) in source.lines().enumerate() {
        let (no, line) = (i + 1, line?);
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if no == 1 {
                if let Some(fields) = header_fields(line) {
                    for (k, v) in fields {
                        match k {
                            "seed" => log.seed = Some(num(v, "seed", no)?),
                            "pattern" if OpPattern::parse(v).is_none() => {
                                return Err(Error::parse(no, format!("unknown operation kind `{v}`")));
                            }
                            _ => {}
                        }
                    }
                }
            }
            continue;
        }
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() < 3 {
            return Err(Error::parse(no, "expected `seq kind start [end]`"));
        }
        let pattern = OpPattern::parse(t[1]).ok_or_else(|| Error::parse(no, format!("unknown operation kind `{}`", t[1])))?;
        let want = if pattern.has_end() { 4 } else { 3 };
        if t.len() != want {
            return Err(Error::parse(no, format!("{} takes {} vertex ids", pattern.as_str(), want - 2)));
        }
        log.ops.push(Operation {
            seq: num(t[0], "sequence number", no)?,
            pattern,
            start: VertexId(num(t[2], "vertex id", no)?),
            end: t.get(3).map(|e| num(e, "vertex id", no).map(VertexId)).transpose()?,
        });
    }
    Ok(log)
}

pub fn write_dynamism_log<W: Write>(log: &DynamismLog, mut sink: W) -> Result<()> {
    let mut out = format!("# policy={} level={} seed={}\n", log.policy.as_str(), log.level, log.seed);
    for r in &log.records {
        out.push_str(&format!("{} {} {}\n", r.seq, r.vertex.0, r.target.0));
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(())
}

pub fn read_dynamism_log<R: BufRead>(source: R) -> Result<DynamismLog> {
    let mut lines = source.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    let fields = header_fields(&header).ok_or_else(|| Error::parse(1, "missing `# policy=.. level=.. seed=..` header"))?;
    let field = |key: &str| {
        fields.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).ok_or_else(|| Error::parse(1, format!("header lacks `{key}`")))
    };
    let policy = field("policy")?;
    let policy = DynamismPolicy::parse(policy).ok_or_else(|| Error::parse(1, format!("unknown policy `{policy}`")))?;
    let mut log = DynamismLog { policy, level: num(field("level")?, "level", 1)?, seed: num(field("seed")?, "seed", 1)?, records: Vec::new() };
    for (i, line) in lines.enumerate() {
        let (no, line) = (i + 2, line?);
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 3 {
            return Err(Error::parse(no, "expected `seq vertex target`"));
        }
        log.records.push(DynamismRecord {
            seq: num(t[0], "sequence number", no)?,
            vertex: VertexId(num(t[1], "vertex id", no)?),
            target: PartitionId(num(t[2], "partition id", no)?),
        });
    }
    Ok(log)
}
