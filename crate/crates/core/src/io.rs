//! Text formats: penalty descriptions, vectors, dense matrices and an
//! extended DIMACS max-flow format.
//!
//! Penalty and vector files are whitespace separated with `#` comments and
//! 0-based indices. Every `emit_*` function is inverted by its `parse_*`
//! counterpart.

use std::fmt::Write as _;
use std::str::FromStr;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::netrep::{Capacity, FlowNetwork, NodeId};
use crate::setfn::{CubicTerms, Edge, Group, Hyperedge, SetFunction};

/// Meaningful lines with their 1-based numbers, comments stripped.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((k + 1, l))
    })
}

fn num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(line, format!("cannot read {what} from '{tok}'")))
}

fn weight(tok: &str, line: usize) -> Result<f64> {
    let w: f64 = num(tok, line, "a weight")?;
    if !w.is_finite() {
        return Err(Error::parse(line, format!("weight '{tok}' is not finite")));
    }
    Ok(w)
}

/// One group per line: `weight v1 v2 …`.
pub fn parse_groups(text: &str) -> Result<Vec<Group>> {
    lines(text)
        .map(|(n, l)| {
            let mut it = l.split_whitespace();
            let w = weight(it.next().unwrap(), n)?;
            let members = it.map(|t| num(t, n, "an index")).collect::<Result<Vec<usize>>>()?;
            if members.is_empty() {
                return Err(Error::parse(n, "group without members"));
            }
            Ok(Group::new(w, members))
        })
        .collect()
}

pub fn emit_groups(groups: &[Group]) -> String {
    let mut s = String::new();
    for g in groups {
        let _ = write!(s, "{}", g.weight);
        for v in &g.members {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    s
}

/// One edge per line: `i j a_ij`.
pub fn parse_edges(text: &str) -> Result<Vec<Edge>> {
    lines(text)
        .map(|(n, l)| {
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 3 {
                return Err(Error::parse(n, format!("expected 'i j weight', got {} fields", t.len())));
            }
            Ok(Edge::new(num(t[0], n, "an index")?, num(t[1], n, "an index")?, weight(t[2], n)?))
        })
        .collect()
}

pub fn emit_edges(edges: &[Edge]) -> String {
    edges.iter().map(|e| format!("{} {} {}\n", e.i, e.j, e.weight)).collect()
}

/// One hyperedge per line: `a_e v1 … vk`.
pub fn parse_hyperedges(text: &str) -> Result<Vec<Hyperedge>> {
    Ok(parse_groups(text)?.into_iter().map(|g| Hyperedge::new(g.weight, g.members)).collect())
}

pub fn emit_hyperedges(hs: &[Hyperedge]) -> String {
    emit_groups(&hs.iter().map(|h| Group::new(h.weight, h.members.clone())).collect::<Vec<_>>())
}

/// One coefficient per line: `value i [j [k]]`; a bare value (the constant term) is ignored.
pub fn parse_cubic(text: &str) -> Result<CubicTerms> {
    let mut t = CubicTerms::new();
    for (n, l) in lines(text) {
        let tok: Vec<&str> = l.split_whitespace().collect();
        let c = weight(tok[0], n)?;
        let idx = tok[1..].iter().map(|x| num(x, n, "an index")).collect::<Result<Vec<usize>>>()?;
        t = match idx[..] {
            [] => t,
            [i] => t.linear(i, c),
            [i, j] if i != j => t.pair(i, j, c),
            [i, j, k] if i != j && j != k && i != k => t.triple(i, j, k, c),
            _ => return Err(Error::parse(n, "a term needs one to three distinct indices")),
        };
    }
    Ok(t)
}

pub fn emit_cubic(t: &CubicTerms) -> String {
    let mut s = String::new();
    for (i, c) in &t.linear {
        let _ = writeln!(s, "{c} {i}");
    }
    for ((i, j), c) in &t.pairs {
        let _ = writeln!(s, "{c} {i} {j}");
    }
    for ((i, j, k), c) in &t.triples {
        let _ = writeln!(s, "{c} {i} {j} {k}");
    }
    s
}

/// Cap `y` on the first line, the weights `w_1 … w_d` on the second.
pub fn parse_truncation(text: &str) -> Result<(Vec<f64>, f64)> {
    let mut it = lines(text);
    let (n, first) = it.next().ok_or_else(|| Error::parse(1, "empty truncation file"))?;
    let cap = weight(first, n)?;
    let (n, second) = it.next().ok_or_else(|| Error::parse(n + 1, "missing weight line"))?;
    let w = second.split_whitespace().map(|t| weight(t, n)).collect::<Result<Vec<_>>>()?;
    if let Some((n, _)) = it.next() {
        return Err(Error::parse(n, "unexpected third line"));
    }
    Ok((w, cap))
}

pub fn emit_truncation(weights: &[f64], cap: f64) -> String {
    format!("{cap}\n{}\n", emit_vector(weights).trim_end())
}

/// Whitespace-separated numbers, possibly across lines.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (n, l) in lines(text) {
        for t in l.split_whitespace() {
            out.push(weight(t, n)?);
        }
    }
    Ok(out)
}

pub fn emit_vector(v: &[f64]) -> String {
    let mut s = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    s.push('\n');
    s
}

/// Penalty families accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyFormat {
    Group,
    Cut,
    Hypergraph,
    Cubic,
    Truncation,
}

impl FromStr for PenaltyFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "group" => PenaltyFormat::Group,
            "cut" => PenaltyFormat::Cut,
            "hypergraph" => PenaltyFormat::Hypergraph,
            "cubic" => PenaltyFormat::Cubic,
            "truncation" => PenaltyFormat::Truncation,
            other => return Err(Error::Input(format!("unknown penalty '{other}'"))),
        })
    }
}

/// Reads a penalty on a ground set of size `d`.
pub fn parse_penalty(format: PenaltyFormat, text: &str, d: usize) -> Result<SetFunction> {
    match format {
        PenaltyFormat::Group => SetFunction::group_cover(d, parse_groups(text)?),
        PenaltyFormat::Cut => SetFunction::graph_cut(d, parse_edges(text)?),
        PenaltyFormat::Hypergraph => SetFunction::hypergraph_cut(d, parse_hyperedges(text)?),
        PenaltyFormat::Cubic => SetFunction::cubic(d, parse_cubic(text)?),
        PenaltyFormat::Truncation => {
            let (w, cap) = parse_truncation(text)?;
            if w.len() != d {
                return Err(Error::Input(format!("truncation has {} weights, expected {d}", w.len())));
            }
            SetFunction::truncation(w, cap)
        }
    }
}

/// Dense matrix from comma-separated rows without a header.
pub fn parse_matrix(text: &str) -> Result<Array2<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::parse(k + 1, e.to_string()))?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        if *cols.get_or_insert(rec.len()) != rec.len() {
            return Err(Error::parse(line, "rows have different lengths"));
        }
        for f in rec.iter() {
            data.push(weight(f, line)?);
        }
        rows += 1;
    }
    Array2::from_shape_vec((rows, cols.unwrap_or(0)), data).map_err(|e| Error::Input(e.to_string()))
}

pub fn emit_matrix(m: &Array2<f64>) -> String {
    m.rows().into_iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",") + "\n").collect()
}

/// A single column or row of numbers in CSV form.
pub fn parse_csv_vector(text: &str) -> Result<Vec<f64>> {
    let m = parse_matrix(text)?;
    if m.nrows() > 1 && m.ncols() > 1 {
        return Err(Error::Input(format!("expected a vector, got a {}×{} matrix", m.nrows(), m.ncols())));
    }
    Ok(m.iter().copied().collect())
}

/// Extended DIMACS max-flow text.
///
/// ```text
/// c offset <C_F>
/// p pmax <n> <m>
/// n <id> s|t|a
/// n <id> d <data-index>
/// a <tail> <head> <cap>|inf|param <data-index>
/// ```
///
/// Ids are 1-based. Nodes without an `n` line are auxiliary. A plain
/// `p max` header is accepted as well.
pub fn parse_dimacs(text: &str) -> Result<FlowNetwork> {
    let mut header: Option<(usize, usize)> = None;
    let mut offset = 0.0;
    let mut roles: Vec<Option<NodeId>> = Vec::new();
    let mut raw_arcs: Vec<(usize, usize, usize, Capacity)> = Vec::new();
    for (k, l) in text.lines().enumerate() {
        let n = k + 1;
        let t: Vec<&str> = l.split_whitespace().collect();
        match t.first().copied() {
            None => {}
            Some("c") => {
                if t.get(1) == Some(&"offset") {
                    offset = weight(t.get(2).ok_or_else(|| Error::parse(n, "offset without value"))?, n)?;
                }
            }
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(n, "second problem line"));
                }
                if t.len() != 4 || !(t[1] == "pmax" || t[1] == "max") {
                    return Err(Error::parse(n, "expected 'p pmax <n> <m>'"));
                }
                let nodes: usize = num(t[2], n, "the node count")?;
                header = Some((nodes, num(t[3], n, "the arc count")?));
                roles = vec![None; nodes];
            }
            Some("n") => {
                let (nodes, _) = header.ok_or_else(|| Error::parse(n, "node line before the problem line"))?;
                let id: usize = num(t.get(1).ok_or_else(|| Error::parse(n, "missing node id"))?, n, "a node id")?;
                if id == 0 || id > nodes {
                    return Err(Error::parse(n, format!("node id {id} outside 1..={nodes}")));
                }
                let role = match (t.get(2).copied(), t.get(3)) {
                    (Some("s"), None) => NodeId::Source,
                    (Some("t"), None) => NodeId::Sink,
                    (Some("a"), None) => NodeId::Aux(usize::MAX),
                    (Some("d"), Some(i)) => NodeId::Data(num(i, n, "a data index")?),
                    _ => return Err(Error::parse(n, "expected 'n <id> s|t|a' or 'n <id> d <index>'")),
                };
                if roles[id - 1].replace(role).is_some() {
                    return Err(Error::parse(n, format!("node {id} described twice")));
                }
            }
            Some("a") => {
                let (nodes, _) = header.ok_or_else(|| Error::parse(n, "arc line before the problem line"))?;
                if t.len() < 4 {
                    return Err(Error::parse(n, "expected 'a <tail> <head> <cap>'"));
                }
                let u: usize = num(t[1], n, "a node id")?;
                let v: usize = num(t[2], n, "a node id")?;
                if u == 0 || v == 0 || u > nodes || v > nodes {
                    return Err(Error::parse(n, format!("arc ({u}, {v}) outside 1..={nodes}")));
                }
                let cap = match (t[3], t.get(4)) {
                    ("inf", None) => Capacity::Infinite,
                    ("param", Some(i)) => Capacity::Param(num(i, n, "a data index")?),
                    (c, None) => Capacity::Finite(weight(c, n)?),
                    _ => return Err(Error::parse(n, "trailing fields on arc line")),
                };
                raw_arcs.push((n, u - 1, v - 1, cap));
            }
            Some(other) => return Err(Error::parse(n, format!("unknown line type '{other}'"))),
        }
    }
    let (nodes, m) = header.ok_or_else(|| Error::parse(1, "missing problem line"))?;
    if raw_arcs.len() != m {
        return Err(Error::Input(format!("header announces {m} arcs, found {}", raw_arcs.len())));
    }
    let count = |f: &dyn Fn(&NodeId) -> bool| roles.iter().flatten().filter(|r| f(r)).count();
    if count(&|r| *r == NodeId::Source) != 1 || count(&|r| *r == NodeId::Sink) != 1 {
        return Err(Error::Input("network needs exactly one source and one sink".into()));
    }
    let d = count(&|r| matches!(r, NodeId::Data(_)));
    let mut seen = vec![false; d];
    let mut map = vec![0usize; nodes];
    let mut net = FlowNetwork::new(d);
    for (id, role) in roles.iter().enumerate() {
        map[id] = match role {
            Some(NodeId::Source) => FlowNetwork::SOURCE,
            Some(NodeId::Sink) => FlowNetwork::SINK,
            Some(NodeId::Data(i)) => {
                if *i >= d || std::mem::replace(&mut seen[*i], true) {
                    return Err(Error::Input(format!("data indices must be a permutation of 0..{d}")));
                }
                net.data(*i)
            }
            _ => net.add_aux(),
        };
    }
    for (n, u, v, cap) in raw_arcs {
        net.add_arc(map[u], map[v], cap).map_err(|e| Error::parse(n, e.to_string()))?;
    }
    net.set_offset(offset);
    Ok(net)
}

pub fn emit_dimacs(net: &FlowNetwork) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "c offset {}", net.offset());
    let _ = writeln!(s, "p pmax {} {}", net.node_count(), net.arcs().len());
    for (v, id) in net.nodes().enumerate() {
        let _ = match id {
            NodeId::Source => writeln!(s, "n {} s", v + 1),
            NodeId::Sink => writeln!(s, "n {} t", v + 1),
            NodeId::Data(i) => writeln!(s, "n {} d {i}", v + 1),
            NodeId::Aux(_) => writeln!(s, "n {} a", v + 1),
        };
    }
    for a in net.arcs() {
        let cap = match a.cap {
            Capacity::Finite(c) => c.to_string(),
            Capacity::Infinite => "inf".into(),
            Capacity::Param(i) => format!("param {i}"),
        };
        let _ = writeln!(s, "a {} {} {cap}", a.tail + 1, a.head + 1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_example() {
        let g = parse_groups("1.0 0 1\n").unwrap();
        assert_eq!(g, vec![Group::new(1.0, vec![0, 1])]);
        assert_eq!(parse_groups(&emit_groups(&g)).unwrap(), g);
    }

    #[test]
    fn vector_example() {
        assert_eq!(parse_vector("2 -0.5 0").unwrap(), vec![2.0, -0.5, 0.0]);
        let v = vec![0.1, -1e-300, 3.0];
        assert_eq!(parse_vector(&emit_vector(&v)).unwrap(), v);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_edges("0 1 1.0\n# note\n0 x 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cubic_ignores_constant() {
        let t = parse_cubic("5\n1 0\n-2 0 1\n0.5 0 1 2\n").unwrap();
        assert_eq!(t, CubicTerms::new().linear(0, 1.0).pair(0, 1, -2.0).triple(0, 1, 2, 0.5));
        assert_eq!(parse_cubic(&emit_cubic(&t)).unwrap(), t);
        assert!(parse_cubic("1 0 0").is_err());
    }

    #[test]
    fn truncation_round_trip() {
        let (w, c) = parse_truncation("2\n1 0.5 3\n").unwrap();
        assert_eq!((w.clone(), c), (vec![1.0, 0.5, 3.0], 2.0));
        assert_eq!(parse_truncation(&emit_truncation(&w, c)).unwrap(), (w, c));
    }

    #[test]
    fn dimacs_diamond_round_trip() {
        let mut net = FlowNetwork::new(1);
        net.add_aux();
        net.add_arc(0, 2, Capacity::Finite(2.0)).unwrap();
        net.add_arc(0, 3, Capacity::Finite(2.0)).unwrap();
        net.add_arc(2, 3, Capacity::Infinite).unwrap();
        net.add_arc(2, 1, Capacity::Finite(1.0)).unwrap();
        net.add_arc(3, 1, Capacity::Finite(2.0)).unwrap();
        net.set_offset(-0.25);
        let back = parse_dimacs(&emit_dimacs(&net)).unwrap();
        assert_eq!(back, net);
    }

    #[test]
    fn plain_dimacs_is_accepted() {
        let net = parse_dimacs("p max 3 2\nn 1 s\nn 3 t\na 1 2 4\na 2 3 5\n").unwrap();
        assert_eq!((net.dim(), net.aux_count()), (0, 1));
        assert_eq!(net.arcs()[0].tail, 0);
    }

    #[test]
    fn matrix_round_trip() {
        let m = parse_matrix("1,2\n3,4.5\n").unwrap();
        assert_eq!(m.shape(), &[2, 2]);
        assert_eq!(parse_matrix(&emit_matrix(&m)).unwrap(), m);
        assert_eq!(parse_csv_vector("1\n2\n3\n").unwrap(), vec![1.0, 2.0, 3.0]);
    }
}
