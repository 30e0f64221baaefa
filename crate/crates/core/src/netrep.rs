//! Flow networks that graph-represent set functions.
//!
//! A network on nodes `U = {s, t} ∪ V ∪ W` represents `F` when
//! `F(A) = min_{Y ⊆ W} κ({s} ∪ A ∪ Y) + C_F` for every `A ⊆ V`. Node
//! indices are fixed: `0` is the source, `1` the sink, `2..2+d` the data
//! nodes and the auxiliary nodes follow.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::setfn::{Kind, MobiusTable, SetFunction};

/// Tolerance below which a negative constructed capacity is clamped to zero.
pub const CONSTRUCTION_TOL: f64 = 1e-9;

/// Role of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeId {
    Source,
    Sink,
    Data(usize),
    Aux(usize),
}

/// Arc capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Capacity {
    Finite(f64),
    Infinite,
    /// Parametric source arc of data node `i`; its value is supplied per solve.
    Param(usize),
}

impl Capacity {
    /// Numeric value, with `Param(i)` resolved by `param(i)`.
    pub fn value(&self, param: &dyn Fn(usize) -> f64) -> f64 {
        match *self {
            Capacity::Finite(c) => c,
            Capacity::Infinite => f64::INFINITY,
            Capacity::Param(i) => param(i),
        }
    }

    fn plus(self, other: Capacity) -> Capacity {
        match (self, other) {
            (Capacity::Finite(a), Capacity::Finite(b)) => Capacity::Finite(a + b),
            _ => Capacity::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub cap: Capacity,
}

/// Directed network with a source, a sink, `d` data nodes and auxiliary nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowNetwork {
    d: usize,
    aux: usize,
    arcs: Vec<Arc>,
    offset: f64,
}

impl FlowNetwork {
    pub const SOURCE: usize = 0;
    pub const SINK: usize = 1;

    /// Network with `d` data nodes, no auxiliary nodes and no arcs.
    pub fn new(d: usize) -> Self {
        FlowNetwork { d, aux: 0, arcs: Vec::new(), offset: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn aux_count(&self) -> usize {
        self.aux
    }

    pub fn node_count(&self) -> usize {
        2 + self.d + self.aux
    }

    pub fn data(&self, i: usize) -> usize {
        debug_assert!(i < self.d);
        2 + i
    }

    pub fn aux(&self, j: usize) -> usize {
        debug_assert!(j < self.aux);
        2 + self.d + j
    }

    /// Adds a fresh auxiliary node and returns its index.
    pub fn add_aux(&mut self) -> usize {
        self.aux += 1;
        self.node_count() - 1
    }

    pub fn node_id(&self, v: usize) -> NodeId {
        match v {
            0 => NodeId::Source,
            1 => NodeId::Sink,
            v if v < 2 + self.d => NodeId::Data(v - 2),
            v => NodeId::Aux(v - 2 - self.d),
        }
    }

    pub fn index(&self, id: NodeId) -> usize {
        match id {
            NodeId::Source => 0,
            NodeId::Sink => 1,
            NodeId::Data(i) => 2 + i,
            NodeId::Aux(j) => 2 + self.d + j,
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(|v| self.node_id(v))
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// The representation constant `C_F`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: f64) {
        self.offset = offset;
    }

    /// Adds an arc after validating endpoints and capacity. Zero capacities are kept.
    pub fn add_arc(&mut self, tail: usize, head: usize, cap: Capacity) -> Result<()> {
        let n = self.node_count();
        if tail >= n || head >= n {
            return Err(Error::Input(format!("arc ({tail}, {head}) refers to a node outside 0..{n}")));
        }
        if tail == head {
            return Err(Error::Input(format!("self loop at node {tail}")));
        }
        match cap {
            Capacity::Finite(c) if !c.is_finite() || c < 0.0 => {
                return Err(Error::Input(format!("capacity {c} on arc ({tail}, {head}) must be finite and ≥ 0")));
            }
            Capacity::Param(i) => {
                if tail != Self::SOURCE || i >= self.d || head != self.data(i) {
                    return Err(Error::Input(format!("parametric arc must run from s to data node {i}")));
                }
                if self.arcs.iter().any(|a| a.cap == Capacity::Param(i)) {
                    return Err(Error::Input(format!("data node {i} already has a parametric arc")));
                }
            }
            _ => {}
        }
        self.arcs.push(Arc { tail, head, cap });
        Ok(())
    }

    fn push_finite(&mut self, tail: usize, head: usize, c: f64) {
        if c > 0.0 {
            self.arcs.push(Arc { tail, head, cap: Capacity::Finite(c) });
        }
    }

    fn push_infinite(&mut self, tail: usize, head: usize) {
        self.arcs.push(Arc { tail, head, cap: Capacity::Infinite });
    }

    /// Same network with parallel constant arcs merged by adding capacities.
    pub fn merged(&self) -> FlowNetwork {
        let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
        let mut arcs: Vec<Arc> = Vec::with_capacity(self.arcs.len());
        for a in &self.arcs {
            if let Capacity::Param(_) = a.cap {
                arcs.push(*a);
                continue;
            }
            match slot.get(&(a.tail, a.head)) {
                Some(&k) => arcs[k].cap = arcs[k].cap.plus(a.cap),
                None => {
                    slot.insert((a.tail, a.head), arcs.len());
                    arcs.push(*a);
                }
            }
        }
        FlowNetwork { arcs, ..self.clone() }
    }

    /// Capacity of the cut whose source side is `side` (indexed by node).
    pub fn cut_capacity(&self, side: &[bool], param: &dyn Fn(usize) -> f64) -> f64 {
        self.arcs
            .iter()
            .filter(|a| side[a.tail] && !side[a.head])
            .map(|a| a.cap.value(param))
            .sum()
    }

    /// Total capacity of the arcs leaving the source.
    pub fn source_capacity(&self) -> f64 {
        self.arcs
            .iter()
            .filter(|a| a.tail == Self::SOURCE)
            .map(|a| a.cap.value(&|_| 0.0))
            .sum()
    }

    /// Adds `extra[i]` to the sink arc of every data node.
    pub fn add_sink_capacity(&mut self, extra: &[f64]) -> Result<()> {
        if extra.len() != self.d {
            return Err(Error::Input("sink shift length differs from d".into()));
        }
        for (i, &c) in extra.iter().enumerate() {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::Input(format!("sink shift {c} must be finite and ≥ 0")));
            }
            self.push_finite(2 + i, Self::SINK, c);
        }
        *self = self.merged();
        Ok(())
    }
}

/// `F + β b` is nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct NondecreasingShift {
    pub beta: f64,
    pub b: Vec<f64>,
}

impl NondecreasingShift {
    pub fn is_identity(&self) -> bool {
        self.beta == 0.0
    }

    /// The per-element shift `β b_i`.
    pub fn offsets(&self) -> Vec<f64> {
        self.b.iter().map(|bi| self.beta * bi).collect()
    }
}

/// Network for `min(w(A), y)`: one auxiliary node `u`, arcs `v → u` of
/// capacity `w_v` and `u → t` of capacity `y`.
pub fn represent_truncation(w: &[f64], y: f64) -> Result<FlowNetwork> {
    if w.iter().any(|&x| !x.is_finite() || x < 0.0) || !y.is_finite() || y < 0.0 {
        return Err(Error::Input("truncation weights and cap must be finite and ≥ 0".into()));
    }
    let mut net = FlowNetwork::new(w.len());
    let u = net.add_aux();
    for (i, &wi) in w.iter().enumerate() {
        net.push_finite(2 + i, u, wi);
    }
    net.push_finite(u, FlowNetwork::SINK, y);
    Ok(net)
}

fn split_linear(net: &mut FlowNetwork, i: usize, c: f64) {
    if c > 0.0 {
        net.push_finite(2 + i, FlowNetwork::SINK, c);
    } else {
        net.push_finite(FlowNetwork::SOURCE, 2 + i, -c);
    }
}

/// Network for a submodular function of order at most three.
///
/// Positive triples are folded into the pair and singleton capacities through
/// `H(A) = Σ { F3(B) : A ⊆ B, F3(B) > 0 }`.
pub fn represent_order3(table: &MobiusTable) -> Result<FlowNetwork> {
    let d = table.dim();
    if table.order() > 3 {
        return Err(Error::Input(format!("table has order {} > 3", table.order())));
    }
    let mut h1 = vec![0.0; d];
    let mut h2: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (key, c) in table.of_order(3) {
        if c > 0.0 {
            for &v in key {
                h1[v] += c;
            }
            for (a, b) in [(key[0], key[1]), (key[0], key[2]), (key[1], key[2])] {
                *h2.entry((a, b)).or_insert(0.0) += c;
            }
        }
    }
    let mut net = FlowNetwork::new(d);
    for (i, h) in h1.iter().enumerate() {
        split_linear(&mut net, i, table.get(&[i]) - h);
    }
    let mut pairs: BTreeMap<(usize, usize), f64> = h2.iter().map(|(&k, &h)| (k, -h)).collect();
    for (key, c) in table.of_order(2) {
        *pairs.entry((key[0], key[1])).or_insert(0.0) -= c;
    }
    for (&(a, b), &cap) in &pairs {
        if cap < -CONSTRUCTION_TOL {
            return Err(Error::Construction(format!(
                "pair ({a}, {b}) has adjusted weight {cap} < 0: the function is not submodular"
            )));
        }
        if cap > CONSTRUCTION_TOL {
            let w = net.add_aux();
            net.push_finite(FlowNetwork::SOURCE, w, cap);
            net.push_infinite(w, 2 + a);
            net.push_infinite(w, 2 + b);
        }
    }
    for (key, c) in table.of_order(3) {
        let w = net.add_aux();
        if c > 0.0 {
            net.push_finite(w, FlowNetwork::SINK, c);
            for &v in key {
                net.push_infinite(2 + v, w);
            }
        } else {
            net.push_finite(FlowNetwork::SOURCE, w, -c);
            for &v in key {
                net.push_infinite(w, 2 + v);
            }
        }
    }
    let net = net.merged();
    let offset = -net.source_capacity();
    let mut net = net;
    net.set_offset(offset);
    Ok(net)
}

/// Network for a function whose coefficients of order ≥ 2 are all nonpositive.
pub fn represent_negative_terms(table: &MobiusTable) -> Result<FlowNetwork> {
    let d = table.dim();
    let mut net = FlowNetwork::new(d);
    for (key, c) in table.iter() {
        if key.len() == 1 {
            split_linear(&mut net, key[0], c);
        } else if c > CONSTRUCTION_TOL {
            return Err(Error::Input(format!("positive coefficient {c} on a term of order {}", key.len())));
        } else if c < 0.0 {
            let w = net.add_aux();
            net.push_finite(FlowNetwork::SOURCE, w, -c);
            for &v in key {
                net.push_infinite(w, 2 + v);
            }
        }
    }
    let mut net = net.merged();
    net.set_offset(-net.source_capacity());
    Ok(net)
}

/// Direct network of an undirected cut: arcs `i → j` and `j → i` of weight `a_ij`.
pub fn represent_graph_cut(d: usize, edges: &[crate::setfn::Edge]) -> Result<FlowNetwork> {
    let mut net = FlowNetwork::new(d);
    for e in edges {
        if e.i >= d || e.j >= d || e.i == e.j || !e.weight.is_finite() || e.weight < 0.0 {
            return Err(Error::Input(format!("invalid edge ({}, {}, {})", e.i, e.j, e.weight)));
        }
        net.push_finite(2 + e.i, 2 + e.j, e.weight);
        net.push_finite(2 + e.j, 2 + e.i, e.weight);
    }
    Ok(net.merged())
}

/// Union of networks sharing `s`, `t` and `V`, with disjoint auxiliary nodes.
pub fn combine(fragments: &[FlowNetwork]) -> Result<FlowNetwork> {
    let first = fragments.first().ok_or_else(|| Error::Input("nothing to combine".into()))?;
    let d = first.d;
    let mut net = FlowNetwork::new(d);
    for f in fragments {
        if f.d != d {
            return Err(Error::Input(format!("cannot combine networks with d = {d} and d = {}", f.d)));
        }
        let shift = net.aux;
        net.aux += f.aux;
        for a in &f.arcs {
            let map = |v: usize| if v < 2 + d { v } else { v + shift };
            if let Capacity::Param(i) = a.cap {
                if net.arcs.iter().any(|b| b.cap == Capacity::Param(i)) {
                    return Err(Error::Input(format!("two parametric arcs for data node {i}")));
                }
            }
            net.arcs.push(Arc { tail: map(a.tail), head: map(a.head), cap: a.cap });
        }
        net.offset += f.offset;
    }
    Ok(net.merged())
}

/// Network for a truncation-sum family in one pass: one auxiliary node per group.
fn represent_groups<'a>(d: usize, groups: impl Iterator<Item = (f64, &'a [usize])>) -> FlowNetwork {
    let mut net = FlowNetwork::new(d);
    for (w, members) in groups {
        let u = net.add_aux();
        for &v in members {
            net.push_finite(2 + v, u, w);
        }
        net.push_finite(u, FlowNetwork::SINK, w);
    }
    net
}

/// Builds a representing network for any supported [`SetFunction`].
pub fn represent(f: &SetFunction) -> Result<FlowNetwork> {
    let d = f.dim();
    match f.kind() {
        Kind::GroupCover(groups) => {
            Ok(represent_groups(d, groups.iter().map(|g| (g.weight, g.members.as_slice()))))
        }
        Kind::GraphCut(edges) => represent_graph_cut(d, edges),
        Kind::HypergraphCut(hs) => {
            // F_e = a_e min(|A ∩ e|, 1) - a_e [e ⊆ A].
            let mut net = represent_groups(d, hs.iter().map(|h| (h.weight, h.members.as_slice())));
            for h in hs {
                let w = net.add_aux();
                net.push_finite(FlowNetwork::SOURCE, w, h.weight);
                for &v in &h.members {
                    net.push_infinite(w, 2 + v);
                }
                net.offset -= h.weight;
            }
            Ok(net.merged())
        }
        Kind::CubicMobius(terms) => {
            let worst = terms.max_second_difference();
            if worst > CONSTRUCTION_TOL {
                return Err(Error::Unsupported(format!(
                    "order-3 condition fails: a pair has second difference {worst} > 0, so F is not submodular"
                )));
            }
            represent_order3(&f.mobius()?)
        }
        Kind::WeightedTruncation { weights, cap } => represent_truncation(weights, *cap),
        Kind::Sum(parts) => {
            let nets = parts.iter().map(represent).collect::<Result<Vec<_>>>()?;
            combine(&nets)
        }
        Kind::Shifted { base, beta, b } => {
            let mut net = represent(base)?;
            if *beta < 0.0 {
                return Err(Error::Unsupported("negative modular shift".into()));
            }
            let extra: Vec<f64> = b.iter().map(|bi| beta * bi).collect();
            net.add_sink_capacity(&extra)?;
            Ok(net)
        }
    }
}

/// Shift `β = max(0, max_i (F(V∖i) - F(V)) / b_i)`; `b` defaults to ones.
pub fn make_nondecreasing(f: &SetFunction, b: Option<&[f64]>) -> Result<(SetFunction, NondecreasingShift)> {
    let d = f.dim();
    let b: Vec<f64> = match b {
        Some(b) if b.len() != d => return Err(Error::Input("shift vector length differs from d".into())),
        Some(b) => b.to_vec(),
        None => vec![1.0; d],
    };
    if b.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Input("shift vector must be finite and ≥ 0".into()));
    }
    let gaps = f.top_gaps();
    let scale = 1.0 + gaps.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let mut beta = 0.0f64;
    for (i, &g) in gaps.iter().enumerate() {
        if g > 1e-12 * scale {
            if b[i] <= 0.0 {
                return Err(Error::Input(format!("b_{i} = 0 but F(V∖{{{i}}}) - F(V) = {g} > 0")));
            }
            beta = beta.max(g / b[i]);
        }
    }
    let shift = NondecreasingShift { beta, b: b.clone() };
    if beta == 0.0 {
        return Ok((f.clone(), shift));
    }
    Ok((SetFunction::shifted(f.clone(), beta, b)?, shift))
}
