//! GML (Graph Modelling Language).
//!
//! Nodes carry `id`, `kind`, an optional `partition` and one attribute per
//! property; edges carry `source`, `target`, `weight`, `label` and their
//! properties. Node ids must be `0..n` in order of appearance. Floats are
//! written with a decimal point or exponent so that they read back as
//! floats, integers without one. Strings escape `&` and `"` as HTML
//! entities.

use std::io::{Read, Write};

use diffpart_core::graph::Properties;
use diffpart_core::{EdgeLabel, Graph, PartitionMap, Scalar, VertexId, VertexKind};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    List(Vec<(String, Value, usize)>),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Word(String),
    Text(String),
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '[' => {
                chars.next();
                out.push((Token::Open, line));
            }
            ']' => {
                chars.next();
                out.push((Token::Close, line));
            }
            '"' => {
                chars.next();
                let start = line;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                        None => return Err(Error::parse(start, "unterminated string")),
                    }
                }
                out.push((Token::Text(unescape(&s)), start));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '[' | ']' | '"' | '#') {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push((Token::Word(s), line));
            }
        }
    }
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('"', "&quot;")
}

fn unescape(s: &str) -> String {
    s.replace("&quot;", "\"").replace("&amp;", "&")
}

fn scalar(word: &str, line: usize) -> Result<Value> {
    if let Ok(i) = word.parse::<i64>() {
        return Ok(Value::Int(i));
    }
    word.parse::<f64>().map(Value::Float).map_err(|_| Error::parse(line, format!("expected a value, found `{word}`")))
}

fn is_key(word: &str) -> bool {
    word.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && word.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_list(tokens: &[(Token, usize)], pos: &mut usize, nested: Option<usize>) -> Result<Vec<(String, Value, usize)>> {
    let mut items = Vec::new();
    loop {
        let Some((tok, line)) = tokens.get(*pos) else {
            return match nested {
                Some(open) => Err(Error::parse(open, "unclosed `[`")),
                None => Ok(items),
            };
        };
        *pos += 1;
        let key = match tok {
            Token::Close if nested.is_some() => return Ok(items),
            Token::Word(w) if is_key(w) => w.clone(),
            _ => return Err(Error::parse(*line, format!("expected a key, found {tok:?}"))),
        };
        let (vtok, vline) = tokens.get(*pos).ok_or_else(|| Error::parse(*line, format!("key `{key}` has no value")))?;
        *pos += 1;
        let value = match vtok {
            Token::Open => Value::List(parse_list(tokens, pos, Some(*vline))?),
            Token::Text(s) => Value::Text(s.clone()),
            Token::Word(w) => scalar(w, *vline)?,
            Token::Close => return Err(Error::parse(*vline, format!("key `{key}` has no value"))),
        };
        items.push((key, value, *line));
    }
}

fn to_scalar(v: &Value) -> Option<Scalar> {
    match v {
        Value::Int(i) => Some(Scalar::Int(*i)),
        Value::Float(f) => Some(Scalar::Float(*f)),
        Value::Text(s) => Some(Scalar::Text(s.clone())),
        Value::List(_) => None,
    }
}

fn int_of(v: &Value, key: &str, line: usize) -> Result<i64> {
    match v {
        Value::Int(i) => Ok(*i),
        _ => Err(Error::parse(line, format!("`{key}` must be an integer"))),
    }
}

fn float_of(v: &Value, key: &str, line: usize) -> Result<f64> {
    match v {
        Value::Int(i) => Ok(*i as f64),
        Value::Float(f) => Ok(*f),
        _ => Err(Error::parse(line, format!("`{key}` must be a number"))),
    }
}

fn text_of<'a>(v: &'a Value, key: &str, line: usize) -> Result<&'a str> {
    match v {
        Value::Text(s) => Ok(s),
        _ => Err(Error::parse(line, format!("`{key}` must be a string"))),
    }
}

/// A graph read from GML with the partitioning stored in it, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct GmlDocument {
    pub graph: Graph,
    pub partition: Option<PartitionMap>,
}

pub fn read_gml<R: Read>(mut source: R) -> Result<GmlDocument> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let tokens = tokenize(&text)?;
    let mut pos = 0;
    let top = parse_list(&tokens, &mut pos, None)?;
    let mut graphs = top.iter().filter(|(k, _, _)| k == "graph");
    let Some((_, Value::List(body), gline)) = graphs.next() else {
        return Err(Error::parse(1, "no `graph [ ... ]` block"));
    };
    if let Some((_, _, line)) = graphs.next() {
        return Err(Error::parse(*line, "more than one graph block"));
    }

    let mut g = Graph::new();
    let mut parts: Vec<Option<i64>> = Vec::new();
    let mut declared_k = None;
    let mut edges = Vec::new();
    for (key, value, line) in body {
        match (key.as_str(), value) {
            ("node", Value::List(attrs)) => {
                let mut id = None;
                let mut kind = VertexKind::Generic;
                let mut partition = None;
                let mut props = Properties::new();
                for (k, v, l) in attrs {
                    match k.as_str() {
                        "id" if id.is_none() => id = Some(int_of(v, k, *l)?),
                        "kind" => {
                            let s = text_of(v, k, *l)?;
                            kind = VertexKind::parse(s).ok_or_else(|| Error::parse(*l, format!("unknown vertex kind `{s}`")))?;
                        }
                        "partition" => partition = Some(int_of(v, k, *l)?),
                        _ => {
                            let s = to_scalar(v).ok_or_else(|| Error::parse(*l, format!("nested list under `{k}`")))?;
                            if props.insert(k.clone(), s).is_some() || k == "id" {
                                return Err(Error::parse(*l, format!("duplicate node attribute `{k}`")));
                            }
                        }
                    }
                }
                let id = id.ok_or_else(|| Error::parse(*line, "node without id"))?;
                if id != g.num_vertices() as i64 {
                    return Err(Error::parse(*line, format!("node id {id} out of sequence, expected {}", g.num_vertices())));
                }
                g.add_vertex_with(kind, props).map_err(|e| Error::parse(*line, e.to_string()))?;
                parts.push(partition);
            }
            ("edge", Value::List(attrs)) => edges.push((attrs, *line)),
            ("partitions", v) => declared_k = Some(int_of(v, key, *line)?),
            ("node" | "edge", _) => return Err(Error::parse(*line, format!("`{key}` must be a list"))),
            _ => {}
        }
    }
    for (attrs, line) in edges {
        let (mut source, mut target, mut weight, mut label) = (None, None, 1.0, EdgeLabel::Plain);
        let mut props = Properties::new();
        for (k, v, l) in attrs {
            match k.as_str() {
                "source" => source = Some(int_of(v, k, *l)?),
                "target" => target = Some(int_of(v, k, *l)?),
                "weight" => weight = float_of(v, k, *l)?,
                "label" => {
                    let s = text_of(v, k, *l)?;
                    label = EdgeLabel::parse(s).ok_or_else(|| Error::parse(*l, format!("unknown edge label `{s}`")))?;
                }
                _ => {
                    let s = to_scalar(v).ok_or_else(|| Error::parse(*l, format!("nested list under `{k}`")))?;
                    if props.insert(k.clone(), s).is_some() {
                        return Err(Error::parse(*l, format!("duplicate edge attribute `{k}`")));
                    }
                }
            }
        }
        let endpoint = |x: Option<i64>, what: &str| -> Result<VertexId> {
            let x = x.ok_or_else(|| Error::parse(line, format!("edge without {what}")))?;
            if x < 0 || x as usize >= g.num_vertices() {
                return Err(Error::parse(line, format!("edge {what} {x} is not a node id")));
            }
            Ok(VertexId(x as usize))
        };
        let (s, t) = (endpoint(source, "source")?, endpoint(target, "target")?);
        let e = g.add_edge(s, t, weight, label).map_err(|e| Error::parse(line, e.to_string()))?;
        for (k, v) in props {
            g.set_edge_property(e, &k, v)?;
        }
    }

    let partition = if parts.iter().all(Option::is_none) && declared_k.is_none() {
        None
    } else {
        let mut assignment = Vec::with_capacity(parts.len());
        for (i, p) in parts.iter().enumerate() {
            match p {
                Some(p) if *p >= 0 && *p <= u32::MAX as i64 => assignment.push(*p as u32),
                _ => return Err(Error::parse(*gline, format!("node {i} lacks a valid partition"))),
            }
        }
        let k = match declared_k {
            Some(k) if k >= 1 && k <= u32::MAX as i64 => k as u32,
            Some(k) => return Err(Error::parse(*gline, format!("bad partition count {k}"))),
            None => assignment.iter().max().map_or(1, |m| m + 1),
        };
        Some(PartitionMap::new(k, assignment).map_err(|e| Error::parse(*gline, e.to_string()))?)
    };
    Ok(GmlDocument { graph: g, partition })
}

fn write_scalar(out: &mut String, v: &Scalar) {
    match v {
        Scalar::Int(i) => out.push_str(&i.to_string()),
        // Debug keeps a `.0` on whole numbers so the type survives a round trip.
        Scalar::Float(f) => out.push_str(&format!("{f:?}")),
        Scalar::Text(s) => out.push_str(&format!("\"{}\"", escape(s))),
    }
}

/// Writes `g`, with each node's partition when `partition` is given.
pub fn write_gml<W: Write>(g: &Graph, partition: Option<&PartitionMap>, mut sink: W) -> Result<()> {
    if let Some(p) = partition {
        p.check_covers(g.num_vertices())?;
    }
    for v in g.vertices() {
        if let Some(k) = v.properties.keys().find(|k| !is_key(k) || matches!(k.as_str(), "id" | "kind" | "partition")) {
            return Err(diffpart_core::Error::InvalidArgument(format!("property `{k}` of vertex {} cannot be a GML key", v.id)).into());
        }
    }
    for e in g.edges() {
        if let Some(k) = e.properties.keys().find(|k| !is_key(k) || matches!(k.as_str(), "source" | "target" | "weight" | "label")) {
            return Err(diffpart_core::Error::InvalidArgument(format!("property `{k}` of edge {} cannot be a GML key", e.id)).into());
        }
    }
    let mut out = String::from("graph [\n  directed 1\n");
    if let Some(p) = partition {
        out.push_str(&format!("  partitions {}\n", p.k()));
    }
    for v in g.vertices() {
        out.push_str(&format!("  node [\n    id {}\n    kind \"{}\"\n", v.id.0, v.kind.as_str()));
        if let Some(p) = partition {
            out.push_str(&format!("    partition {}\n", p.get(v.id).0));
        }
        for (k, value) in &v.properties {
            out.push_str(&format!("    {k} "));
            write_scalar(&mut out, value);
            out.push('\n');
        }
        out.push_str("  ]\n");
    }
    for e in g.edges() {
        out.push_str(&format!(
            "  edge [\n    source {}\n    target {}\n    weight {:?}\n    label \"{}\"\n",
            e.start.0,
            e.end.0,
            e.weight,
            e.label.as_str()
        ));
        for (k, value) in &e.properties {
            out.push_str(&format!("    {k} "));
            write_scalar(&mut out, value);
            out.push('\n');
        }
        out.push_str("  ]\n");
    }
    out.push_str("]\n");
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(s: &str) -> Result<GmlDocument> {
        read_gml(s.as_bytes())
    }

    #[test]
    fn single_node() {
        let doc = read("graph [ node [ id 0 ] ]").unwrap();
        assert_eq!((doc.graph.num_vertices(), doc.graph.num_edges()), (1, 0));
        assert_eq!(doc.partition, None);
    }

    #[test]
    fn two_node_path() {
        let doc = read("Creator \"x\"\ngraph [\n node [ id 0 ]\n node [ id 1 ]\n edge [ source 0 target 1 ]\n]\n").unwrap();
        let e = &doc.graph.edges()[0];
        assert_eq!((e.start, e.end, e.weight, e.label), (VertexId(0), VertexId(1), 1.0, EdgeLabel::Plain));
    }

    #[test]
    fn malformed_nesting() {
        assert!(matches!(read("graph [ node [ id 0 ]"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read("graph [ node [ id 0 ] ] ]"), Err(Error::Parse { .. })));
        assert!(matches!(read("graph [ node [ id 1 ] ]"), Err(Error::Parse { .. })));
        assert!(matches!(read("graph [ node [ id 0 ]\n edge [ source 0 target 3 ] ]"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read("graph [ node [ id 0 label \"a ]"), Err(Error::Parse { .. })));
    }

    #[test]
    fn attributes_round_trip() {
        let mut g = Graph::new();
        let mut props = Properties::new();
        props.insert("latitude".into(), Scalar::Float(45.0));
        props.insert("longitude".into(), Scalar::Float(26.125));
        props.insert("name".into(), Scalar::Text("a \"b\" & c".into()));
        props.insert("rank".into(), Scalar::Int(-3));
        let a = g.add_vertex_with(VertexKind::GisPoint, props).unwrap();
        let b = g.add_vertex(VertexKind::File);
        let e = g.add_edge(a, b, 0.1, EdgeLabel::Road).unwrap();
        g.set_edge_property(e, "WEIGHT", Scalar::Float(1e-9)).unwrap();
        let p = PartitionMap::new(3, vec![2, 0]).unwrap();
        let mut out = Vec::new();
        write_gml(&g, Some(&p), &mut out).unwrap();
        let doc = read_gml(out.as_slice()).unwrap();
        assert_eq!(doc.graph, g);
        assert_eq!(doc.partition, Some(p));
    }
}
