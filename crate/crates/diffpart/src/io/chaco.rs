//! Chaco/METIS adjacency format.
//!
//! Header `n m [fmt]`, then one line per vertex listing its 1-indexed
//! neighbors. `fmt` digits flag vertex sizes, vertex weights and edge
//! weights; vertex sizes and weights are accepted and ignored. Lines
//! starting with `%` are comments.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use diffpart_core::{EdgeLabel, Graph, VertexId, VertexKind};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChacoHeader {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub vertex_sizes: bool,
    pub vertex_weights: bool,
    pub edge_weights: bool,
}

impl ChacoHeader {
    fn parse(line: &str, lineno: usize) -> Result<Self> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !(2..=4).contains(&tokens.len()) {
            return Err(Error::parse(lineno, "header must be `n m [fmt [ncon]]`"));
        }
        let num = |t: &str, what: &str| t.parse::<usize>().map_err(|_| Error::parse(lineno, format!("bad {what} `{t}`")));
        let num_vertices = num(tokens[0], "vertex count")?;
        let num_edges = num(tokens[1], "edge count")?;
        let fmt = tokens.get(2).copied().unwrap_or("0");
        if fmt.len() > 3 || !fmt.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::parse(lineno, format!("bad fmt `{fmt}`")));
        }
        if let Some(ncon) = tokens.get(3) {
            if *ncon != "1" {
                return Err(Error::parse(lineno, "only one vertex weight per vertex is supported"));
            }
        }
        let digits = format!("{fmt:0>3}");
        let flag = |i: usize| digits.as_bytes()[i] == b'1';
        Ok(ChacoHeader { num_vertices, num_edges, vertex_sizes: flag(0), vertex_weights: flag(1), edge_weights: flag(2) })
    }
}

/// Reads a Chaco graph. Each undirected edge becomes one PLAIN edge from
/// its lower to its higher vertex id.
pub fn read_chaco<R: BufRead>(source: R) -> Result<Graph> {
    let mut lines = source.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next_line = || -> Result<Option<(usize, String)>> {
        for (no, line) in lines.by_ref() {
            let line = line?;
            if !line.trim_start().starts_with('%') {
                return Ok(Some((no, line)));
            }
        }
        Ok(None)
    };
    let Some((hno, header)) = next_line()? else {
        return Err(Error::parse(1, "missing header"));
    };
    let h = ChacoHeader::parse(&header, hno)?;

    // (low, high) -> (weight, occurrences, first line)
    let mut pairs: BTreeMap<(usize, usize), (f64, u32, usize)> = BTreeMap::new();
    for v in 1..=h.num_vertices {
        let Some((no, line)) = next_line()? else {
            return Err(Error::parse(hno, format!("header declares {} vertices, body has {}", h.num_vertices, v - 1)));
        };
        let mut tokens = line.split_whitespace();
        let skip = usize::from(h.vertex_sizes) + usize::from(h.vertex_weights);
        for _ in 0..skip {
            let t = tokens.next().ok_or_else(|| Error::parse(no, "missing vertex size or weight"))?;
            t.parse::<f64>().map_err(|_| Error::parse(no, format!("non-numeric token `{t}`")))?;
        }
        while let Some(t) = tokens.next() {
            let u: usize = t.parse().map_err(|_| Error::parse(no, format!("non-numeric token `{t}`")))?;
            if u == 0 || u > h.num_vertices {
                return Err(Error::parse(no, format!("neighbor {u} out of range 1..={}", h.num_vertices)));
            }
            if u == v {
                return Err(Error::parse(no, format!("self-loop on vertex {v}")));
            }
            let w = if h.edge_weights {
                let t = tokens.next().ok_or_else(|| Error::parse(no, format!("missing weight for neighbor {u}")))?;
                t.parse::<f64>().map_err(|_| Error::parse(no, format!("non-numeric weight `{t}`")))?
            } else {
                1.0
            };
            let key = (v.min(u), v.max(u));
            let entry = pairs.entry(key).or_insert((w, 0, no));
            if entry.0 != w {
                return Err(Error::parse(no, format!("edge {}-{} listed with weights {} and {w}", key.0, key.1, entry.0)));
            }
            entry.1 += 1;
        }
    }
    while let Some((no, line)) = next_line()? {
        if !line.trim().is_empty() {
            return Err(Error::parse(no, format!("more than the {} declared vertex lines", h.num_vertices)));
        }
    }
    if let Some((&(a, b), &(_, _, no))) = pairs.iter().find(|(_, e)| e.1 != 2) {
        return Err(Error::parse(no, format!("edge {a}-{b} is not listed exactly once at each endpoint")));
    }
    if pairs.len() != h.num_edges {
        return Err(Error::parse(hno, format!("header declares {} edges, body has {}", h.num_edges, pairs.len())));
    }
    let mut g = Graph::with_vertices(h.num_vertices, VertexKind::Generic);
    for (&(a, b), &(w, _, no)) in &pairs {
        g.add_edge(VertexId(a - 1), VertexId(b - 1), w, EdgeLabel::Plain).map_err(|e| Error::parse(no, e.to_string()))?;
    }
    Ok(g)
}

/// Writes the undirected view of `g`.
pub fn write_chaco<W: Write>(g: &Graph, mut sink: W) -> Result<()> {
    let view = g.undirected_view();
    let weighted = view.pairs().any(|(_, _, w)| w != 1.0);
    writeln!(sink, "{} {} {}", view.num_vertices(), view.num_edges(), if weighted { "001" } else { "000" })?;
    let mut line = String::new();
    for v in 0..view.num_vertices() {
        line.clear();
        for (u, w) in view.neighbors(v) {
            if !line.is_empty() {
                line.push(' ');
            }
            if weighted {
                line.push_str(&format!("{} {w}", u + 1));
            } else {
                line.push_str(&(u + 1).to_string());
            }
        }
        writeln!(sink, "{line}")?;
    }
    sink.flush()?;
    Ok(())
}
