//! Preflow-push maximum flow with warm restarts and extraction of the
//! inclusion-minimal and inclusion-maximal minimum cuts.
//!
//! Active nodes are processed in FIFO order. Labels follow the two-phase
//! convention `d(v) = min(dist(v, t), n + dist(v, s))`, so a single run ends
//! with an actual flow: excess that cannot reach the sink is sent back to the
//! source.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::netrep::{Capacity, FlowNetwork};

/// Relative tolerance on flow comparisons; scaled by the total finite capacity.
pub const FLOW_TOL: f64 = 1e-12;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowOptions {
    /// Periodic backward BFS relabeling.
    pub global_relabel: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { global_relabel: true }
    }
}

/// Basic-operation counters of one or more runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub pushes: u64,
    pub relabels: u64,
    pub global_relabels: u64,
}

impl Counters {
    /// Pushes plus relabels.
    pub fn work(&self) -> u64 {
        self.pushes + self.relabels
    }

    pub fn add(&mut self, other: &Counters) {
        self.pushes += other.pushes;
        self.relabels += other.relabels;
        self.global_relabels += other.global_relabels;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    Minimal,
    Maximal,
}

/// Source side of a cut and its capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub source_side: Vec<usize>,
    pub capacity: f64,
}

/// Arcs `tail → head` and `head → tail` sharing one antisymmetric flow value.
#[derive(Debug, Clone)]
struct Pair {
    tail: u32,
    head: u32,
    fwd: f64,
    bwd: f64,
    flow: f64,
}

/// Preflow, labels and residual structure of one network.
#[derive(Debug, Clone)]
pub struct FlowState {
    n: usize,
    pairs: Vec<Pair>,
    first: Vec<u32>,
    adj: Vec<(u32, bool)>,
    excess: Vec<f64>,
    label: Vec<u32>,
    current: Vec<u32>,
    src_pair: Vec<u32>,
    sink_pair: Vec<u32>,
    eps: f64,
    opts: FlowOptions,
    counters: Counters,
}

const S: u32 = 0;
const T: u32 = 1;

fn tolerance(arcs: &[(usize, usize, f64)]) -> f64 {
    let total: f64 = arcs.iter().map(|a| a.2).filter(|c| c.is_finite()).sum();
    FLOW_TOL * total.max(1.0)
}

impl FlowState {
    /// Builds the residual structure; every non-terminal node gets an `s`-pair and a `t`-pair.
    pub(crate) fn build(n: usize, arcs: &[(usize, usize, f64)], eps: f64, opts: FlowOptions) -> Self {
        let mut slot: HashMap<(u32, u32), u32> = HashMap::with_capacity(arcs.len() + 2 * n);
        let mut pairs: Vec<Pair> = Vec::with_capacity(arcs.len() + 2 * n);
        let mut add = |u: u32, v: u32, cap: f64, flow: f64, pairs: &mut Vec<Pair>| {
            let (a, b, fwd) = if u < v { (u, v, true) } else { (v, u, false) };
            let k = *slot.entry((a, b)).or_insert_with(|| {
                pairs.push(Pair { tail: a, head: b, fwd: 0.0, bwd: 0.0, flow: 0.0 });
                (pairs.len() - 1) as u32
            });
            let p = &mut pairs[k as usize];
            if fwd {
                p.fwd += cap;
                p.flow += flow;
            } else {
                p.bwd += cap;
                p.flow -= flow;
            }
        };
        for &(u, v, c) in arcs {
            add(u as u32, v as u32, c, 0.0, &mut pairs);
        }
        for v in 2..n as u32 {
            add(S, v, 0.0, 0.0, &mut pairs);
            add(v, T, 0.0, 0.0, &mut pairs);
        }
        Self::from_pairs(n, pairs, eps, opts)
    }

    fn from_pairs(n: usize, pairs: Vec<Pair>, eps: f64, opts: FlowOptions) -> Self {
        let mut deg = vec![0u32; n + 1];
        for p in &pairs {
            deg[p.tail as usize] += 1;
            deg[p.head as usize] += 1;
        }
        let mut first = vec![0u32; n + 1];
        for v in 0..n {
            first[v + 1] = first[v] + deg[v];
        }
        let mut fill = first.clone();
        let mut adj = vec![(0u32, false); 2 * pairs.len()];
        let mut src_pair = vec![NONE; n];
        let mut sink_pair = vec![NONE; n];
        for (k, p) in pairs.iter().enumerate() {
            adj[fill[p.tail as usize] as usize] = (k as u32, true);
            fill[p.tail as usize] += 1;
            adj[fill[p.head as usize] as usize] = (k as u32, false);
            fill[p.head as usize] += 1;
            if p.tail == S && p.head >= 2 {
                src_pair[p.head as usize] = k as u32;
            }
            if p.tail == T && p.head >= 2 {
                sink_pair[p.head as usize] = k as u32;
            }
        }
        let mut label = vec![0u32; n];
        label[S as usize] = n as u32;
        FlowState {
            n,
            pairs,
            current: first[..n].to_vec(),
            first,
            adj,
            excess: vec![0.0; n],
            label,
            src_pair,
            sink_pair,
            eps,
            opts,
            counters: Counters::default(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn tolerance(&self) -> f64 {
        self.eps
    }

    pub fn excess(&self, v: usize) -> f64 {
        self.excess[v]
    }

    pub fn label(&self, v: usize) -> u32 {
        self.label[v]
    }

    pub(crate) fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }

    /// Arc pairs as `(tail, head, c(tail, head), c(head, tail))` with `tail < head`.
    pub(crate) fn pair_caps(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        self.pairs.iter().map(|q| (q.tail as usize, q.head as usize, q.fwd, q.bwd))
    }

    /// Sum of all finite capacities; an infinite arc never needs to carry more.
    fn finite_total(&self) -> f64 {
        self.pairs
            .iter()
            .flat_map(|q| [q.fwd, q.bwd])
            .filter(|c| c.is_finite())
            .sum()
    }

    #[inline]
    fn other(&self, p: u32, out: bool) -> u32 {
        let q = &self.pairs[p as usize];
        if out {
            q.head
        } else {
            q.tail
        }
    }

    /// Residual capacity leaving the node that owns entry `(p, out)`.
    #[inline]
    fn residual(&self, p: u32, out: bool) -> f64 {
        let q = &self.pairs[p as usize];
        if out {
            q.fwd - q.flow
        } else {
            q.bwd + q.flow
        }
    }

    /// Residual capacity of the reverse direction of entry `(p, out)`.
    #[inline]
    fn residual_in(&self, p: u32, out: bool) -> f64 {
        self.residual(p, !out)
    }

    #[inline]
    fn send(&mut self, p: u32, out: bool, delta: f64) {
        let q = &mut self.pairs[p as usize];
        if out {
            q.flow += delta;
        } else {
            q.flow -= delta;
        }
    }

    /// Net flow value into the sink.
    pub fn value(&self) -> f64 {
        let mut v = 0.0;
        for q in &self.pairs {
            if q.head == T {
                v += q.flow;
            } else if q.tail == T {
                v -= q.flow;
            }
        }
        v
    }

    /// Net flow on every arc pair as `(tail, head, flow)`.
    pub fn arc_flows(&self) -> Vec<(usize, usize, f64)> {
        self.pairs.iter().map(|q| (q.tail as usize, q.head as usize, q.flow)).collect()
    }

    fn saturate_source(&mut self, only_reaching: Option<&[u32]>) {
        let bound = 1.0 + self.finite_total();
        let (lo, hi) = (self.first[0] as usize, self.first[1] as usize);
        for e in lo..hi {
            let (p, out) = self.adj[e];
            let w = self.other(p, out) as usize;
            if let Some(dist) = only_reaching {
                if dist[w] == NONE {
                    continue;
                }
            }
            let r = self.residual(p, out);
            if r <= 0.0 {
                continue;
            }
            let delta = if r.is_infinite() { bound } else { r };
            self.send(p, out, delta);
            self.excess[w] += delta;
        }
    }

    /// BFS over reverse residual arcs from `root`, never passing through `avoid`.
    fn reverse_bfs(&self, root: u32, avoid: u32, dist: &mut [u32], base: u32) {
        let mut queue = VecDeque::new();
        dist[root as usize] = base;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x as usize];
            for e in self.first[x as usize]..self.first[x as usize + 1] {
                let (p, out) = self.adj[e as usize];
                let y = self.other(p, out);
                if y == avoid || dist[y as usize] != NONE {
                    continue;
                }
                if self.residual_in(p, out) > self.eps {
                    dist[y as usize] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
    }

    fn distances_to_sink(&self) -> Vec<u32> {
        let mut dist = vec![NONE; self.n];
        self.reverse_bfs(T, S, &mut dist, 0);
        dist
    }

    /// Exact labels `min(dist(v, t), n + dist(v, s))`, `2n` when neither exists.
    fn relabel_from(&mut self, mut dist: Vec<u32>) {
        let n = self.n as u32;
        dist[S as usize] = NONE;
        self.reverse_bfs(S, T, &mut dist, n);
        for v in 0..self.n {
            self.label[v] = if dist[v] == NONE { 2 * n } else { dist[v] };
        }
        self.label[T as usize] = 0;
        self.label[S as usize] = n;
        self.current.copy_from_slice(&self.first[..self.n]);
    }

    fn global_relabel(&mut self) {
        self.counters.global_relabels += 1;
        let dist = self.distances_to_sink();
        self.relabel_from(dist);
    }

    /// Runs push/relabel from scratch on the current capacities.
    pub(crate) fn solve_cold(&mut self) -> Result<()> {
        for q in &mut self.pairs {
            q.flow = 0.0;
        }
        self.excess.iter_mut().for_each(|e| *e = 0.0);
        self.saturate_source(None);
        if self.opts.global_relabel {
            self.global_relabel();
        } else {
            self.label.iter_mut().for_each(|l| *l = 0);
            self.label[S as usize] = self.n as u32;
            self.current.copy_from_slice(&self.first[..self.n]);
        }
        self.discharge_all()
    }

    /// Re-solves after capacity changes made through [`FlowState::set_terminal`]:
    /// saturates source arcs into nodes that reach `t`, relabels exactly, then runs.
    pub(crate) fn resolve(&mut self) -> Result<()> {
        let dist = self.distances_to_sink();
        self.saturate_source(Some(&dist));
        self.relabel_from(dist);
        self.discharge_all()
    }

    /// Sets the capacities of `s → v` and `v → t`.
    ///
    /// Only increases of the source arc and decreases of the sink arc are allowed;
    /// flow above a lowered sink capacity becomes excess at `v`.
    pub(crate) fn set_terminal(&mut self, v: usize, src: f64, sink: f64) -> Result<()> {
        let sp = self.src_pair[v] as usize;
        let tp = self.sink_pair[v] as usize;
        let slack = self.eps;
        let old_src = self.pairs[sp].fwd;
        let old_sink = self.pairs[tp].bwd;
        if src < old_src - slack || sink > old_sink + slack {
            return Err(Error::Contract(format!(
                "non-monotone update at node {v}: source {old_src} -> {src}, sink {old_sink} -> {sink}"
            )));
        }
        self.pairs[sp].fwd = src.max(old_src);
        let sink = sink.min(old_sink);
        let q = &mut self.pairs[tp];
        q.bwd = sink;
        // Pair (t, v): flow is oriented t → v, so v → t carries -flow.
        let into_t = -q.flow;
        if into_t > sink {
            q.flow = -sink;
            self.excess[v] += into_t - sink;
        }
        Ok(())
    }

    pub(crate) fn terminal_caps(&self, v: usize) -> (f64, f64) {
        (self.pairs[self.src_pair[v] as usize].fwd, self.pairs[self.sink_pair[v] as usize].bwd)
    }

    fn discharge_all(&mut self) -> Result<()> {
        let n = self.n;
        let mut queue: VecDeque<u32> = VecDeque::new();
        let mut queued = vec![false; n];
        for v in 2..n {
            if self.excess[v] > self.eps {
                queue.push_back(v as u32);
                queued[v] = true;
            }
        }
        let threshold = n.max(16);
        let mut since = 0usize;
        while let Some(v) = queue.pop_front() {
            queued[v as usize] = false;
            since += self.discharge(v, &mut queue, &mut queued)?;
            if self.opts.global_relabel && since >= threshold {
                since = 0;
                self.global_relabel();
            }
        }
        Ok(())
    }

    /// Pushes and relabels at `v` until its excess is gone; returns the relabel count.
    fn discharge(&mut self, v: u32, queue: &mut VecDeque<u32>, queued: &mut [bool]) -> Result<usize> {
        let vu = v as usize;
        let cap = 2 * self.n as u32;
        let mut relabels = 0;
        while self.excess[vu] > self.eps {
            if self.label[vu] >= cap {
                return Err(Error::Numerical(format!(
                    "node {v} keeps excess {} without a residual path",
                    self.excess[vu]
                )));
            }
            let end = self.first[vu + 1];
            let mut e = self.current[vu];
            while e < end {
                let (p, out) = self.adj[e as usize];
                let w = self.other(p, out);
                let r = self.residual(p, out);
                if r > self.eps && self.label[vu] == self.label[w as usize] + 1 {
                    let delta = self.excess[vu].min(r);
                    self.send(p, out, delta);
                    self.excess[vu] -= delta;
                    self.excess[w as usize] += delta;
                    self.counters.pushes += 1;
                    if w >= 2 && !queued[w as usize] && self.excess[w as usize] > self.eps {
                        queued[w as usize] = true;
                        queue.push_back(w);
                    }
                    if self.excess[vu] <= self.eps {
                        break;
                    }
                }
                e += 1;
            }
            self.current[vu] = e;
            if self.excess[vu] > self.eps {
                let mut best = cap;
                for e in self.first[vu]..end {
                    let (p, out) = self.adj[e as usize];
                    if self.residual(p, out) > self.eps {
                        best = best.min(self.label[self.other(p, out) as usize] + 1);
                    }
                }
                self.label[vu] = best;
                self.current[vu] = self.first[vu];
                self.counters.relabels += 1;
                relabels += 1;
            }
        }
        Ok(relabels)
    }

    /// Whether no non-terminal node holds excess above the tolerance.
    pub fn is_flow(&self) -> bool {
        (2..self.n).all(|v| self.excess[v].abs() <= self.eps)
    }

    fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([S]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for e in self.first[x as usize]..self.first[x as usize + 1] {
                let (p, out) = self.adj[e as usize];
                let y = self.other(p, out);
                if !seen[y as usize] && self.residual(p, out) > self.eps {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    fn reaching_sink(&self) -> Vec<bool> {
        let mut dist = vec![NONE; self.n];
        self.reverse_bfs(T, NONE, &mut dist, 0);
        dist.iter().map(|&x| x != NONE).collect()
    }

    /// Source-side membership of the minimal or maximal minimum cut.
    pub fn cut_mask(&self, side: CutSide) -> Result<Vec<bool>> {
        if !self.is_flow() {
            return Err(Error::Contract("cut requested before the flow is maximum".into()));
        }
        let mask = match side {
            CutSide::Minimal => self.reachable_from_source(),
            CutSide::Maximal => self.reaching_sink().iter().map(|r| !r).collect(),
        };
        if mask[T as usize] || !mask[S as usize] {
            return Err(Error::Contract("residual path from s to t: flow is not maximum".into()));
        }
        Ok(mask)
    }

    /// Capacity of the cut with source side `mask`.
    pub fn cut_capacity(&self, mask: &[bool]) -> f64 {
        self.pairs
            .iter()
            .map(|q| match (mask[q.tail as usize], mask[q.head as usize]) {
                (true, false) => q.fwd,
                (false, true) => q.bwd,
                _ => 0.0,
            })
            .sum()
    }

    /// Minimal or maximal minimum cut.
    pub fn min_cut(&self, side: CutSide) -> Result<Cut> {
        let mask = self.cut_mask(side)?;
        Ok(Cut {
            capacity: self.cut_capacity(&mask),
            source_side: (0..self.n).filter(|&v| mask[v]).collect(),
        })
    }

    /// Checks capacity constraints, conservation and labeling validity.
    pub fn check_invariants(&self) -> Result<()> {
        let slack = 10.0 * self.eps;
        for q in &self.pairs {
            if q.flow > q.fwd + slack || -q.flow > q.bwd + slack {
                return Err(Error::Internal(format!("capacity violated on ({}, {})", q.tail, q.head)));
            }
        }
        let mut net = vec![0.0; self.n];
        for q in &self.pairs {
            net[q.head as usize] += q.flow;
            net[q.tail as usize] -= q.flow;
        }
        for v in 2..self.n {
            if (net[v] - self.excess[v]).abs() > slack * (1.0 + net[v].abs()) || net[v] < -slack {
                return Err(Error::Internal(format!("excess bookkeeping broken at node {v}")));
            }
        }
        for v in 0..self.n {
            for e in self.first[v]..self.first[v + 1] {
                let (p, out) = self.adj[e as usize];
                let r = self.residual(p, out);
                if r > self.eps && r.is_finite() {
                    let w = self.other(p, out) as usize;
                    if self.label[v] > self.label[w] + 1 && self.label[v] < 2 * self.n as u32 {
                        return Err(Error::Internal(format!("invalid label on residual arc ({v}, {w})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Contracted copy: `map[v]` is `0` (merge into s), `1` (merge into t) or the
    /// new index of `v`. Flows are carried over, loops and `s`–`t` arcs dropped.
    pub(crate) fn contract_state(&self, map: &[u32]) -> FlowState {
        let n = map.iter().copied().max().unwrap_or(1).max(1) as usize + 1;
        let mut slot: HashMap<(u32, u32), u32> = HashMap::with_capacity(self.pairs.len());
        let mut pairs: Vec<Pair> = Vec::new();
        let mut merge = |u: u32, v: u32, fwd: f64, bwd: f64, flow: f64, pairs: &mut Vec<Pair>| {
            if u == v || (u.min(v) == S && u.max(v) == T) {
                return;
            }
            let (a, b, f, bk, fl) = if u < v { (u, v, fwd, bwd, flow) } else { (v, u, bwd, fwd, -flow) };
            let k = *slot.entry((a, b)).or_insert_with(|| {
                pairs.push(Pair { tail: a, head: b, fwd: 0.0, bwd: 0.0, flow: 0.0 });
                (pairs.len() - 1) as u32
            });
            let q = &mut pairs[k as usize];
            q.fwd += f;
            q.bwd += bk;
            q.flow += fl;
        };
        for q in &self.pairs {
            merge(map[q.tail as usize], map[q.head as usize], q.fwd, q.bwd, q.flow, &mut pairs);
        }
        for v in 2..n as u32 {
            merge(S, v, 0.0, 0.0, 0.0, &mut pairs);
            merge(v, T, 0.0, 0.0, 0.0, &mut pairs);
        }
        let mut child = Self::from_pairs(n, pairs, self.eps, self.opts);
        for v in 2..self.n {
            let c = map[v] as usize;
            if c >= 2 {
                child.excess[c] = self.excess[v];
            }
        }
        child
    }
}

fn instantiate(net: &FlowNetwork, param: &dyn Fn(usize) -> f64) -> Result<Vec<(usize, usize, f64)>> {
    let mut arcs = Vec::with_capacity(net.arcs().len());
    for a in net.arcs() {
        let c = a.cap.value(param);
        if let Capacity::Param(i) = a.cap {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::Input(format!("parametric capacity of data node {i} is {c}")));
            }
        }
        arcs.push((a.tail, a.head, c));
    }
    Ok(arcs)
}

/// Maximum flow of `net` with parametric arcs valued by `param`.
pub fn max_flow(net: &FlowNetwork, param: &dyn Fn(usize) -> f64, opts: &FlowOptions) -> Result<FlowState> {
    let arcs = instantiate(net, param)?;
    let mut state = FlowState::build(net.node_count(), &arcs, tolerance(&arcs), *opts);
    state.solve_cold()?;
    if state.value() > state.finite_total() {
        return Err(Error::Input("an infinite-capacity path joins s and t".into()));
    }
    Ok(state)
}

/// Re-solves `prev` after a monotone capacity change: source arcs may only
/// grow, sink arcs may only shrink, every other capacity must be unchanged.
pub fn warm_restart(
    net: &FlowNetwork,
    mut prev: FlowState,
    param: &dyn Fn(usize) -> f64,
) -> Result<FlowState> {
    let arcs = instantiate(net, param)?;
    let fresh = FlowState::build(net.node_count(), &arcs, prev.eps, prev.opts);
    if fresh.pairs.len() != prev.pairs.len() {
        return Err(Error::Contract("network structure changed between solves".into()));
    }
    let slack = prev.eps;
    for (k, (old, new)) in prev.pairs.iter().zip(&fresh.pairs).enumerate() {
        let terminal = old.tail == S || old.tail == T;
        let same = |a: f64, b: f64| a == b || (a - b).abs() <= slack;
        if (!terminal || old.head == T) && !(same(old.fwd, new.fwd) && same(old.bwd, new.bwd)) {
            return Err(Error::Contract(format!("inner arc pair {k} changed capacity")));
        }
        if terminal && old.head != T {
            if old.tail == S && !same(old.bwd, new.bwd) {
                return Err(Error::Contract(format!("arc into the source changed on pair {k}")));
            }
            if old.tail == T && !same(old.fwd, new.fwd) {
                return Err(Error::Contract(format!("arc out of the sink changed on pair {k}")));
            }
        }
    }
    for v in 2..prev.n {
        let (src, _) = fresh.terminal_caps(v);
        let (_, sink) = fresh.terminal_caps(v);
        prev.set_terminal(v, src, sink)?;
    }
    prev.resolve()?;
    Ok(prev)
}

/// Merges `shrink` (containing exactly one terminal) into that terminal.
///
/// Loops are removed and parallel constant arcs merged. Surviving data and
/// auxiliary nodes are renumbered in order; parametric arcs keep pointing at
/// their (renumbered) data node.
pub fn contract(net: &FlowNetwork, shrink: &[usize]) -> Result<FlowNetwork> {
    let n = net.node_count();
    if let Some(&v) = shrink.iter().find(|&&v| v >= n) {
        return Err(Error::Input(format!("node {v} is not in the network")));
    }
    let has_s = shrink.contains(&FlowNetwork::SOURCE);
    let has_t = shrink.contains(&FlowNetwork::SINK);
    let into = match (has_s, has_t) {
        (true, true) => return Err(Error::Input("shrink set contains both terminals".into())),
        (false, false) => return Err(Error::Input("shrink set contains neither terminal".into())),
        (true, false) => FlowNetwork::SOURCE,
        (false, true) => FlowNetwork::SINK,
    };
    let mut gone = vec![false; n];
    for &v in shrink {
        gone[v] = true;
    }
    let d = net.dim();
    let keep_data: Vec<usize> = (0..d).filter(|&i| !gone[2 + i]).collect();
    let keep_aux: Vec<usize> = (0..net.aux_count()).filter(|&j| !gone[2 + d + j]).collect();
    let mut out = FlowNetwork::new(keep_data.len());
    for _ in &keep_aux {
        out.add_aux();
    }
    let mut map = vec![into; n];
    map[0] = 0;
    map[1] = 1;
    let mut data_map = vec![usize::MAX; d];
    for (k, &i) in keep_data.iter().enumerate() {
        map[2 + i] = 2 + k;
        data_map[i] = k;
    }
    for (k, &j) in keep_aux.iter().enumerate() {
        map[2 + d + j] = 2 + keep_data.len() + k;
    }
    map[into] = into;
    for a in net.arcs() {
        let (u, v) = (map[a.tail], map[a.head]);
        if u == v {
            continue;
        }
        let cap = match a.cap {
            Capacity::Param(i) if data_map[i] == usize::MAX => continue,
            Capacity::Param(i) => Capacity::Param(data_map[i]),
            c => c,
        };
        out.add_arc(u, v, cap)?;
    }
    out.set_offset(net.offset());
    Ok(out.merged())
}
