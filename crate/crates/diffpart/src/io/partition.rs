//! Partition maps and DiDiC load-state checkpoints.
//!
//! A partition map is a `# k=K` header followed by `vertex partition` lines
//! in vertex order. A load-state checkpoint is a CSV with one row per
//! (vertex, system) holding the primary and secondary loads of that vertex
//! in that system.

use std::io::{BufRead, Read, Write};

use diffpart_core::didic::LoadState;
use diffpart_core::PartitionMap;

use crate::error::{Error, Result};

pub fn write_partition_map<W: Write>(p: &PartitionMap, mut sink: W) -> Result<()> {
    let mut out = format!("# k={}\n", p.k());
    for (v, part) in p.as_slice().iter().enumerate() {
        out.push_str(&format!("{v} {part}\n"));
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(())
}

pub fn read_partition_map<R: BufRead>(source: R) -> Result<PartitionMap> {
    let mut k = None;
    let mut assignment = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let (no, line) = (i + 1, line?);
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("k=") {
                k = Some(v.parse::<u32>().map_err(|_| Error::parse(no, format!("bad partition count `{v}`")))?);
            }
            continue;
        }
        let mut t = line.split_whitespace();
        let (Some(v), Some(p), None) = (t.next(), t.next(), t.next()) else {
            return Err(Error::parse(no, "expected `vertex partition`"));
        };
        let v: usize = v.parse().map_err(|_| Error::parse(no, format!("bad vertex id `{v}`")))?;
        if v != assignment.len() {
            return Err(Error::parse(no, format!("vertex {v} out of sequence, expected {}", assignment.len())));
        }
        assignment.push(p.parse::<u32>().map_err(|_| Error::parse(no, format!("bad partition id `{p}`")))?);
    }
    let k = k.ok_or_else(|| Error::parse(1, "missing `# k=K` header"))?;
    Ok(PartitionMap::new(k, assignment)?)
}

pub fn write_load_state<W: Write>(state: &LoadState, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["vertex", "system", "primary", "secondary"])?;
    for v in 0..state.num_vertices() {
        for c in 0..state.k() {
            w.serialize((v, c, state.primary(v, c), state.secondary(v, c)))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a checkpoint written by [`write_load_state`] for `k` systems.
pub fn read_load_state<R: Read>(source: R, k: usize) -> Result<LoadState> {
    let mut rows = Vec::new();
    for (i, rec) in csv::Reader::from_reader(source).deserialize::<(usize, usize, f64, f64)>().enumerate() {
        rows.push((i + 2, rec?));
    }
    if k == 0 || rows.len() % k != 0 {
        return Err(Error::parse(rows.len() + 1, format!("{} rows do not fill {k} systems per vertex", rows.len())));
    }
    let mut state = LoadState::zeros(rows.len() / k, k);
    for (i, (no, (v, c, w, l))) in rows.into_iter().enumerate() {
        if (v, c) != (i / k, i % k) {
            return Err(Error::parse(no, format!("expected vertex {} system {}", i / k, i % k)));
        }
        state.set_primary(v, c, w);
        state.set_secondary(v, c, l);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_round_trip() {
        let p = PartitionMap::new(3, vec![0, 2, 2, 1]).unwrap();
        let mut out = Vec::new();
        write_partition_map(&p, &mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), "# k=3\n0 0\n1 2\n2 2\n3 1\n");
        assert_eq!(read_partition_map(out.as_slice()).unwrap(), p);
    }

    #[test]
    fn map_errors() {
        assert!(matches!(read_partition_map("0 0\n".as_bytes()), Err(Error::Parse { .. })));
        assert!(matches!(read_partition_map("# k=2\n1 0\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_partition_map("# k=2\n0 2\n".as_bytes()), Err(Error::Core(_))));
    }

    #[test]
    fn load_state_round_trip() {
        let mut s = LoadState::zeros(2, 2);
        s.set_primary(0, 0, 100.0);
        s.set_primary(1, 1, 1.0 / 3.0);
        s.set_secondary(1, 0, -2.5e-17);
        let mut out = Vec::new();
        write_load_state(&s, &mut out).unwrap();
        assert_eq!(read_load_state(out.as_slice(), 2).unwrap(), s);
        assert!(read_load_state(out.as_slice(), 3).is_err());
    }
}
