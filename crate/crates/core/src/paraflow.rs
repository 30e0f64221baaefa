//! Parametric minimum cuts by divide and conquer over the parameter.
//!
//! Data node `i` carries the parametric capacity `g_i(α) = c_i + φ_i(α)`:
//! its positive part on `s → i`, its negative part on `i → t`. As α grows the
//! minimizers of `F(A) - Σ_{i∈A} φ_i(α)` form a nested chain. Each slice
//! balances `Σ φ_i(α) = F(S)` on the current subset, re-solves the flow from
//! a warm state and splits the subproblem by the minimal and maximal cuts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maxflow::{Counters, CutSide, FlowOptions, FlowState, FLOW_TOL};
use crate::netrep::{Capacity, FlowNetwork};
use crate::prox::SeparablePiece;
use crate::setfn::SetFunction;

/// Two breakpoints closer than this are merged.
pub const BREAKPOINT_TIE: f64 = 1e-10;

/// Shape of `φ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Curve {
    /// Inverse derivative of a [`SeparablePiece`], continued by `T + α` for `α > 0`.
    Norm(SeparablePiece),
    /// `α + z/λ`, from the dual of `½(z - λτ)²` with the parameter scaled by `λ²`.
    Signed { z: f64, lambda: f64 },
}

/// `φ_i(α) = curve(α) + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeCurve {
    pub curve: Curve,
    pub shift: f64,
}

impl NodeCurve {
    pub fn value(&self, alpha: f64) -> f64 {
        match self.curve {
            Curve::Norm(p) => {
                if alpha == f64::INFINITY {
                    f64::INFINITY
                } else {
                    p.phi_ext(alpha) + self.shift
                }
            }
            Curve::Signed { z, lambda } => alpha + z / lambda + self.shift,
        }
    }

    /// Limit at `α → -∞`.
    pub fn lower(&self) -> f64 {
        match self.curve {
            Curve::Norm(_) => self.shift,
            Curve::Signed { .. } => f64::NEG_INFINITY,
        }
    }

    /// Largest α with `value(α) = tau`.
    pub fn inverse(&self, tau: f64) -> f64 {
        let t = tau - self.shift;
        match self.curve {
            Curve::Norm(p) => p.psi_prime_ext(t),
            Curve::Signed { z, lambda } => t - z / lambda,
        }
    }

    /// Linear pieces `(start, slope, intercept)` when `φ` is piecewise linear.
    fn pieces(&self) -> Option<Vec<(f64, f64, f64)>> {
        match self.curve {
            Curve::Signed { z, lambda } => {
                Some(vec![(f64::NEG_INFINITY, 1.0, z / lambda + self.shift)])
            }
            Curve::Norm(p) if p.r == 1.0 => {
                let (l, a) = (p.lambda, p.z.abs());
                Some(vec![
                    (f64::NEG_INFINITY, 0.0, self.shift),
                    (-l * a, 1.0 / (l * l), a / l + self.shift),
                    (0.0, 1.0, p.threshold() + self.shift),
                ])
            }
            Curve::Norm(_) => None,
        }
    }
}

/// Solution of `Σ φ_i(α) = target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Balance {
    pub alpha: f64,
    /// Set when no finite α reaches the target.
    pub degenerate: bool,
}

fn sum_at(curves: &[&NodeCurve], alpha: f64) -> f64 {
    curves.iter().map(|c| c.value(alpha)).sum()
}

fn solve_linear(curves: &[&NodeCurve], target: f64) -> Option<f64> {
    let (mut slope, mut icpt) = (0.0, 0.0);
    let mut events = Vec::new();
    for c in curves {
        let pieces = c.pieces()?;
        slope += pieces[0].1;
        icpt += pieces[0].2;
        for w in pieces.windows(2) {
            events.push((w[1].0, w[1].1 - w[0].1, w[1].2 - w[0].2));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (at, ds, di) in events {
        if slope > 0.0 && icpt + slope * at >= target {
            return Some((target - icpt) / slope);
        }
        slope += ds;
        icpt += di;
    }
    Some((target - icpt) / slope)
}

fn solve_quadratic(curves: &[&NodeCurve], target: f64) -> Option<f64> {
    let first = match curves.first()?.curve {
        Curve::Norm(p) => p,
        _ => return None,
    };
    let mut q = 0.0;
    for c in curves {
        match c.curve {
            Curve::Norm(p) if p.r == 2.0 && p.lambda == first.lambda && c.shift == 0.0 => q += p.z * p.z,
            _ => return None,
        }
    }
    let l = first.lambda;
    let total = q / (l * l);
    if target <= total {
        Some(0.5 * (l * l - l * (q / target).sqrt()))
    } else {
        Some((target - total) / curves.len() as f64)
    }
}

fn solve_bisection(curves: &[&NodeCurve], target: f64) -> Balance {
    let mut hi = 1.0f64;
    while sum_at(curves, hi) < target {
        hi *= 2.0;
    }
    let mut lo = -1.0f64;
    while sum_at(curves, lo) > target {
        lo *= 2.0;
        if lo < -1e300 {
            return Balance { alpha: f64::NEG_INFINITY, degenerate: true };
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum_at(curves, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Balance { alpha: 0.5 * (lo + hi), degenerate: false }
}

/// Largest α with `Σ φ_i(α) = target` over the given curves.
pub fn solve_balance(curves: &[&NodeCurve], target: f64) -> Balance {
    let lower: f64 = curves.iter().map(|c| c.lower()).sum();
    let tol = 1e-12 * target.abs().max(1.0);
    if target <= lower + tol {
        let alpha = curves.iter().map(|c| c.inverse(c.lower())).fold(f64::INFINITY, f64::min);
        let alpha = if curves.is_empty() { f64::NEG_INFINITY } else { alpha };
        return Balance { alpha, degenerate: alpha == f64::NEG_INFINITY || target < lower - tol };
    }
    if let Some(alpha) = solve_linear(curves, target).or_else(|| solve_quadratic(curves, target)) {
        return Balance { alpha, degenerate: false };
    }
    solve_bisection(curves, target)
}

/// Balancing parameter `α ≤ 0` with `Σ_i φ_i(α) = c`, `c ≥ 0`.
///
/// When the balance needs `α > 0` the result is `0`, flagged as degenerate.
pub fn balanced_alpha(pieces: &[SeparablePiece], c: f64) -> Result<Balance> {
    if !(c >= 0.0) {
        return Err(Error::Domain(format!("balance target must be ≥ 0, got {c}")));
    }
    let curves: Vec<NodeCurve> = pieces.iter().map(|&p| NodeCurve { curve: Curve::Norm(p), shift: 0.0 }).collect();
    let refs: Vec<&NodeCurve> = curves.iter().collect();
    let b = solve_balance(&refs, c);
    if b.alpha > 0.0 {
        return Ok(Balance { alpha: 0.0, degenerate: true });
    }
    Ok(b)
}

/// A representing network together with the curves of its data nodes.
#[derive(Debug, Clone)]
pub struct ParametricProblem {
    network: FlowNetwork,
    curves: Vec<NodeCurve>,
    /// `c(s, i) - c(i, t)` from the constant arcs.
    constant: Vec<f64>,
    /// Arcs other than data-terminal and parametric ones.
    inner: Vec<(usize, usize, f64)>,
    eps: f64,
}

impl ParametricProblem {
    pub fn new(network: FlowNetwork, curves: Vec<NodeCurve>) -> Result<Self> {
        let d = network.dim();
        if curves.len() != d {
            return Err(Error::Input(format!("{} curves for {d} data nodes", curves.len())));
        }
        let is_data = |v: usize| (2..2 + d).contains(&v);
        let mut constant = vec![0.0; d];
        let mut inner = Vec::new();
        let mut total = 0.0;
        for a in network.arcs() {
            let c = match a.cap {
                Capacity::Param(_) => continue,
                Capacity::Finite(c) => c,
                Capacity::Infinite => f64::INFINITY,
            };
            if c.is_finite() {
                total += c;
            }
            let terminal_data = if a.tail == FlowNetwork::SOURCE && is_data(a.head) {
                Some((a.head - 2, 1.0))
            } else if a.head == FlowNetwork::SINK && is_data(a.tail) {
                Some((a.tail - 2, -1.0))
            } else {
                None
            };
            match terminal_data {
                Some((i, _)) if !c.is_finite() => {
                    return Err(Error::Unsupported(format!("infinite terminal arc at data node {i}")));
                }
                Some((i, sign)) => constant[i] += sign * c,
                None => inner.push((a.tail, a.head, c)),
            }
        }
        for c in &curves {
            if let Curve::Signed { z, lambda } = c.curve {
                total += z.abs() / lambda + c.shift.abs();
            }
        }
        Ok(ParametricProblem { network, curves, constant, inner, eps: FLOW_TOL * total.max(1.0) })
    }

    pub fn network(&self) -> &FlowNetwork {
        &self.network
    }

    pub fn curves(&self) -> &[NodeCurve] {
        &self.curves
    }

    fn terminal_split(&self, i: usize, alpha: f64) -> (f64, f64) {
        let g = self.constant[i] + self.curves[i].value(alpha);
        if g >= 0.0 {
            (g, 0.0)
        } else {
            (0.0, -g)
        }
    }

    fn engine(&self, alpha: f64, opts: &FlowOptions) -> FlowState {
        let mut arcs = self.inner.clone();
        for i in 0..self.curves.len() {
            let (src, sink) = self.terminal_split(i, alpha);
            arcs.push((FlowNetwork::SOURCE, 2 + i, src));
            arcs.push((2 + i, FlowNetwork::SINK, sink));
        }
        FlowState::build(self.network.node_count(), &arcs, self.eps, *opts)
    }

    /// Cold maximum flow with every parametric capacity evaluated at `alpha`.
    pub fn cold_flow(&self, alpha: f64, opts: &FlowOptions) -> Result<FlowState> {
        let mut state = self.engine(alpha, opts);
        state.solve_cold()?;
        Ok(state)
    }

    /// An interval `[α₀, 0]` outside of which the minimal cuts no longer move.
    ///
    /// The lower end comes from the worst-case margin `c(i,t) - c(s,i) - Σ_u c(u,i)`
    /// of every data node, clamped to the range of `φ_i`.
    pub fn alpha_bounds(&self) -> (f64, f64) {
        let d = self.curves.len();
        let mut margin: Vec<f64> = self.constant.iter().map(|c| -c).collect();
        for &(u, v, c) in &self.inner {
            if (2..2 + d).contains(&v) && u != FlowNetwork::SOURCE {
                margin[v - 2] -= c;
            }
        }
        let mut lo = f64::INFINITY;
        for (c, m) in self.curves.iter().zip(margin) {
            let m = match c.curve {
                Curve::Norm(p) => m.clamp(c.shift, c.shift + p.threshold()),
                Curve::Signed { .. } => m,
            };
            lo = lo.min(c.inverse(m));
        }
        let lo = if d == 0 { -1.0 } else { lo - 1.0 };
        (lo.min(-1.0), 0.0)
    }
}

/// Nodes whose cut position changes at `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub alpha: f64,
    pub nodes: Vec<usize>,
}

/// Nested minimizers `A_0 ⊂ A_1 ⊂ … ⊂ A_k = V`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutChain {
    /// Cumulative sets; `sets[0]` holds the nodes already selected as `α → -∞`.
    pub sets: Vec<Vec<usize>>,
    /// `breakpoints[j]` is where `sets[j + 1]` enters (`-∞` for a nonempty `sets[0]`
    /// is not listed).
    pub breakpoints: Vec<f64>,
    /// `Σ_{i ∈ A_j} φ_i(α_j)` as measured on the network.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ChainSolution {
    pub chain: CutChain,
    /// `φ_i` at the level of node `i`.
    pub tau: Vec<f64>,
    pub counters: Counters,
    pub flow_solves: usize,
    pub max_depth: usize,
}

/// Subproblem on a contracted network whose flow is maximum at `alpha`.
struct Sub {
    state: FlowState,
    alpha: f64,
    upper: f64,
    /// Original node of each contracted node.
    orig: Vec<usize>,
    /// Constant part of `s → v` and `v → t` for contracted data nodes.
    src_const: Vec<f64>,
    sink_const: Vec<f64>,
    depth: usize,
}

struct Driver<'a> {
    pb: &'a ParametricProblem,
    d: usize,
    levels: Vec<Level>,
    counters: Counters,
    flow_solves: usize,
    max_depth: usize,
}

impl Driver<'_> {
    fn is_data(&self, orig: usize) -> bool {
        (2..2 + self.d).contains(&orig)
    }

    /// Contracted subproblem; `map` sends each node to 0 (s), 1 (t) or its new index.
    fn contract(&self, parent: &Sub, state: &FlowState, map: &[u32], alpha: f64, upper: f64) -> Sub {
        let child = state.contract_state(map);
        let n = child.node_count();
        let mut orig = vec![usize::MAX; n];
        orig[0] = 0;
        orig[1] = 1;
        for v in 2..map.len() {
            if map[v] >= 2 {
                orig[map[v] as usize] = parent.orig[v];
            }
        }
        let (mut src, mut sink) = (vec![0.0; n], vec![0.0; n]);
        for (u, v, fwd, bwd) in state.pair_caps() {
            let (cu, cv) = (map[u] as usize, map[v] as usize);
            let own_data = self.is_data(parent.orig[v]);
            if cu == 0 && cv >= 2 {
                src[cv] += if u == 0 && own_data { parent.src_const[v] } else { fwd };
            }
            if cv == 0 && cu >= 2 {
                src[cu] += bwd;
            }
            if cv == 1 && cu >= 2 {
                sink[cu] += fwd;
            }
            if cu == 1 && cv >= 2 {
                sink[cv] += if u == 1 && own_data { parent.sink_const[v] } else { bwd };
            }
        }
        Sub { state: child, alpha, upper, orig, src_const: src, sink_const: sink, depth: parent.depth + 1 }
    }

    fn record(&mut self, alpha: f64, nodes: Vec<usize>) {
        if !nodes.is_empty() {
            self.levels.push(Level { alpha, nodes });
        }
    }

    fn run_state(&mut self, state: &mut FlowState, cold: bool) -> Result<()> {
        state.reset_counters();
        if cold {
            state.solve_cold()?;
        } else {
            state.resolve()?;
        }
        self.counters.add(&state.counters());
        self.flow_solves += 1;
        Ok(())
    }

    fn slice(&mut self, sub: Sub, stack: &mut Vec<Sub>) -> Result<()> {
        self.max_depth = self.max_depth.max(sub.depth);
        if sub.depth > self.d + self.pb.network.aux_count() + 2 {
            return Err(Error::Internal("parametric recursion does not terminate".into()));
        }
        let n = sub.state.node_count();
        let data: Vec<usize> = (2..n).filter(|&v| self.is_data(sub.orig[v])).collect();
        if data.is_empty() {
            return Ok(());
        }
        let (mut c_s, mut c_t) = (0.0, 0.0);
        for (u, v, fwd, bwd) in sub.state.pair_caps() {
            let own_data = v >= 2 && self.is_data(sub.orig[v]);
            if u == 0 && v >= 2 {
                c_s += if own_data { sub.src_const[v] } else { fwd };
            } else if u == 1 && v >= 2 {
                c_t += if own_data { sub.sink_const[v] } else { bwd };
            }
        }
        let target = c_t - c_s - data.iter().map(|&v| self.pb.constant[sub.orig[v] - 2]).sum::<f64>();
        let curves: Vec<&NodeCurve> = data.iter().map(|&v| &self.pb.curves[sub.orig[v] - 2]).collect();
        let bal = solve_balance(&curves, target);
        let to_original = |vs: &mut dyn Iterator<Item = usize>| -> Vec<usize> { vs.map(|v| sub.orig[v] - 2).collect() };
        if bal.degenerate {
            let nodes = to_original(&mut data.iter().copied());
            self.record(f64::NEG_INFINITY, nodes);
            return Ok(());
        }
        if !(bal.alpha > sub.alpha && bal.alpha < sub.upper) {
            // Rounding left no room inside the bracket: the subset moves as one block.
            let alpha = bal.alpha.clamp(sub.alpha, sub.upper);
            let nodes = to_original(&mut data.iter().copied());
            self.record(alpha, nodes);
            return Ok(());
        }
        let alpha = bal.alpha;
        let mut child = sub.state.clone();
        for &v in &data {
            let i = sub.orig[v] - 2;
            let g = self.pb.constant[i] + self.pb.curves[i].value(alpha);
            let (gp, gm) = if g >= 0.0 { (g, 0.0) } else { (0.0, -g) };
            child.set_terminal(v, sub.src_const[v] + gp, sub.sink_const[v] + gm)?;
        }
        self.run_state(&mut child, false)?;
        let lo = child.cut_mask(CutSide::Minimal)?;
        let hi = child.cut_mask(CutSide::Maximal)?;
        if (2..n).all(|v| hi[v]) {
            let nodes = to_original(&mut data.iter().copied());
            self.record(alpha, nodes);
            return Ok(());
        }
        let mid = to_original(&mut data.iter().copied().filter(|&v| hi[v] && !lo[v]));
        self.record(alpha, mid);

        let mut next = 2u32;
        let lower_map: Vec<u32> = (0..n)
            .map(|v| match v {
                0 | 1 => v as u32,
                _ if lo[v] => {
                    next += 1;
                    next - 1
                }
                _ => 1,
            })
            .collect();
        if data.iter().any(|&v| lo[v]) {
            let lower = self.contract(&sub, &sub.state, &lower_map, sub.alpha, alpha);
            stack.push(lower);
        }
        next = 2;
        let upper_map: Vec<u32> = (0..n)
            .map(|v| match v {
                0 | 1 => v as u32,
                _ if hi[v] => 0,
                _ => {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        if data.iter().any(|&v| !hi[v]) {
            let upper = self.contract(&sub, &child, &upper_map, alpha, sub.upper);
            stack.push(upper);
        }
        Ok(())
    }
}

/// Computes the full chain of minimizers of `F(A) - Σ_{i∈A} φ_i(α)` over all α.
pub fn solve(pb: &ParametricProblem, opts: &FlowOptions) -> Result<ChainSolution> {
    let d = pb.curves.len();
    let n = pb.network.node_count();
    let mut drv = Driver { pb, d, levels: Vec::new(), counters: Counters::default(), flow_solves: 0, max_depth: 0 };
    let mut base = pb.engine(f64::NEG_INFINITY, opts);
    drv.run_state(&mut base, true)?;
    let low = base.cut_mask(CutSide::Maximal)?;
    drv.record(f64::NEG_INFINITY, (0..d).filter(|&i| low[2 + i]).collect());

    let root_parent = Sub {
        state: base,
        alpha: f64::NEG_INFINITY,
        upper: f64::INFINITY,
        orig: (0..n).collect(),
        src_const: vec![0.0; n],
        sink_const: vec![0.0; n],
        depth: 0,
    };

    // Auxiliary nodes still selected once every data node is.
    let mut next = 2u32;
    let top_map: Vec<u32> = (0..n)
        .map(|v| match v {
            0 | 1 => v as u32,
            _ if low[v] || v < 2 + d => 0,
            _ => {
                next += 1;
                next - 1
            }
        })
        .collect();
    let mut top = root_parent.state.contract_state(&top_map);
    drv.run_state(&mut top, false)?;
    let top_cut = top.cut_mask(CutSide::Minimal)?;
    let high: Vec<bool> = (0..n).map(|v| v == 0 || v < 2 + d || low[v] || (v >= 2 && top_map[v] >= 2 && top_cut[top_map[v] as usize])).collect();

    next = 2;
    let root_map: Vec<u32> = (0..n)
        .map(|v| match v {
            0 | 1 => v as u32,
            _ if low[v] => 0,
            _ if !high[v] => 1,
            _ => {
                next += 1;
                next - 1
            }
        })
        .collect();
    let mut stack = Vec::new();
    if (0..d).any(|i| !low[2 + i]) {
        let root = drv.contract(&root_parent, &root_parent.state, &root_map, f64::NEG_INFINITY, f64::INFINITY);
        stack.push(root);
    }
    drop(root_parent);
    while let Some(sub) = stack.pop() {
        drv.slice(sub, &mut stack)?;
    }
    let (chain, tau) = assemble(d, std::mem::take(&mut drv.levels), &pb.curves)?;
    Ok(ChainSolution { chain, tau, counters: drv.counters, flow_solves: drv.flow_solves, max_depth: drv.max_depth })
}

fn assemble(d: usize, mut levels: Vec<Level>, curves: &[NodeCurve]) -> Result<(CutChain, Vec<f64>)> {
    levels.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let mut merged: Vec<Level> = Vec::new();
    for lv in levels {
        match merged.last_mut() {
            Some(last)
                if last.alpha == lv.alpha
                    || (last.alpha.is_finite()
                        && (last.alpha - lv.alpha).abs() <= BREAKPOINT_TIE * last.alpha.abs().max(1.0)) =>
            {
                last.nodes.extend(lv.nodes)
            }
            _ => merged.push(lv),
        }
    }
    let mut tau = vec![f64::NAN; d];
    let mut seen = vec![false; d];
    let mut chain = CutChain { sets: Vec::new(), breakpoints: Vec::new(), values: Vec::new() };
    if merged.first().map_or(true, |l| l.alpha != f64::NEG_INFINITY) {
        chain.sets.push(Vec::new());
        chain.values.push(0.0);
    }
    let mut current: Vec<usize> = Vec::new();
    let mut value = 0.0;
    for lv in merged {
        for &i in &lv.nodes {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Internal(format!("data node {i} assigned to two levels")));
            }
            tau[i] = curves[i].value(lv.alpha);
            if lv.alpha != f64::NEG_INFINITY {
                value += tau[i];
            }
        }
        current.extend(&lv.nodes);
        current.sort_unstable();
        if lv.alpha != f64::NEG_INFINITY {
            chain.breakpoints.push(lv.alpha);
        }
        chain.sets.push(current.clone());
        chain.values.push(value);
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::Internal(format!("data node {i} never left the sink side")));
    }
    Ok((chain, tau))
}

/// Re-balances every chain segment against `f` itself, so that `τ(A_j) = F(A_j)` holds
/// to rounding.
pub fn recover_tau(chain: &CutChain, f: &SetFunction, curves: &[NodeCurve]) -> Result<Vec<f64>> {
    let d = f.dim();
    if curves.len() != d {
        return Err(Error::Input(format!("{} curves for d = {d}", curves.len())));
    }
    let mut tau = vec![f64::NAN; d];
    let mut prev: Vec<usize> = Vec::new();
    let mut prev_val = f.eval(&[])?;
    for set in &chain.sets {
        let val = f.eval(set)?;
        let fresh: Vec<usize> = set.iter().copied().filter(|i| prev.binary_search(i).is_err()).collect();
        if !fresh.is_empty() {
            let cs: Vec<&NodeCurve> = fresh.iter().map(|&i| &curves[i]).collect();
            let b = solve_balance(&cs, val - prev_val);
            for &i in &fresh {
                tau[i] = curves[i].value(b.alpha);
            }
        }
        prev = set.clone();
        prev_val = val;
    }
    if let Some(i) = tau.iter().position(|t| t.is_nan()) {
        return Err(Error::Internal(format!("chain does not cover data node {i}")));
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netrep::represent;
    use crate::setfn::{Edge, Group};

    fn norm_curves(z: &[f64], lambda: f64, r: f64) -> Vec<NodeCurve> {
        z.iter()
            .map(|&z| NodeCurve { curve: Curve::Norm(SeparablePiece::new(z, lambda, r).unwrap()), shift: 0.0 })
            .collect()
    }

    #[test]
    fn balanced_alpha_examples() {
        let p = SeparablePiece::new(2.0, 1.0, 1.0).unwrap();
        let b = balanced_alpha(&[p], 1.0).unwrap();
        assert_eq!(b, Balance { alpha: -1.0, degenerate: false });
        let q = SeparablePiece::new(2.0, 1.0, 2.0).unwrap();
        let b = balanced_alpha(&[q], 1.0).unwrap();
        assert!((b.alpha + 0.5).abs() < 1e-15);
        assert_eq!(balanced_alpha(&[p], 0.0).unwrap().alpha, -2.0);
        assert!(balanced_alpha(&[p], 5.0).unwrap().degenerate);
        assert!(matches!(balanced_alpha(&[p], -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn balance_methods_agree() {
        let z = [0.5, -1.5, 2.0, 0.0, 3.0];
        for r in [1.0, 2.0] {
            let cs = norm_curves(&z, 0.7, r);
            let refs: Vec<&NodeCurve> = cs.iter().collect();
            for target in [0.1, 1.0, 5.0, 40.0] {
                let exact = solve_balance(&refs, target);
                let bis = solve_bisection(&refs, target);
                assert!((exact.alpha - bis.alpha).abs() < 1e-9, "r={r} target={target}");
                assert!((sum_at(&refs, exact.alpha) - target).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn alpha_bounds_example() {
        let mut net = FlowNetwork::new(1);
        net.add_arc(2, 1, Capacity::Finite(5.0)).unwrap();
        let pb = ParametricProblem::new(net, norm_curves(&[2.0], 1.0, 1.0)).unwrap();
        assert_eq!(pb.alpha_bounds(), (-1.0, 0.0));
    }

    #[test]
    fn group_chain_is_nested() {
        let f = SetFunction::group_cover(4, vec![Group::new(1.0, vec![0, 1]), Group::new(2.0, vec![2, 3])]).unwrap();
        let curves = norm_curves(&[3.0, 0.5, 1.0, -1.0], 1.0, 1.0);
        let pb = ParametricProblem::new(represent(&f).unwrap(), curves.clone()).unwrap();
        let sol = solve(&pb, &FlowOptions::default()).unwrap();
        let c = &sol.chain;
        assert_eq!(c.sets.last().unwrap(), &vec![0, 1, 2, 3]);
        for w in c.sets.windows(2) {
            assert!(w[0].len() < w[1].len() && w[0].iter().all(|i| w[1].contains(i)));
        }
        for w in c.breakpoints.windows(2) {
            assert!(w[0] < w[1]);
        }
        let tau = recover_tau(c, &f, &curves).unwrap();
        for s in &c.sets {
            let t: f64 = s.iter().map(|&i| tau[i]).sum();
            assert!((t - f.eval(s).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn signed_chain_on_cut() {
        let f = SetFunction::graph_cut(3, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)]).unwrap();
        let curves: Vec<NodeCurve> =
            [1.0, -2.0, 0.5].iter().map(|&z| NodeCurve { curve: Curve::Signed { z, lambda: 0.5 }, shift: 0.0 }).collect();
        let pb = ParametricProblem::new(represent(&f).unwrap(), curves.clone()).unwrap();
        let sol = solve(&pb, &FlowOptions::default()).unwrap();
        assert_eq!(sol.chain.sets.last().unwrap().len(), 3);
        let tau = recover_tau(&sol.chain, &f, &curves).unwrap();
        assert!(tau.iter().sum::<f64>().abs() < 1e-12);
    }
}
