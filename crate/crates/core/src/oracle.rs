//! Exhaustive reference solvers for small instances.
//!
//! Everything here enumerates subsets and is meant for tests and for the
//! `verify` command; the budget keeps accidental large inputs from hanging.

use crate::error::{Error, Result};
use crate::netrep::{Capacity, FlowNetwork};
use crate::paraflow::{solve_balance, NodeCurve};
use crate::prox::{DualSetup, ProxProblem};
use crate::setfn::SetFunction;

/// Ties closer than this count as equal minima.
pub const ORACLE_TIE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_d: usize,
    /// Largest number of subsets any single enumeration may visit.
    pub max_subsets: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_d: 12, max_subsets: 1 << 20 }
    }
}

impl OracleBudget {
    fn check_nodes(&self, k: usize, what: &str) -> Result<()> {
        if k >= 64 || 1u64 << k > self.max_subsets {
            return Err(Error::Budget(format!("{what}: 2^{k} subsets exceed the limit {}", self.max_subsets)));
        }
        Ok(())
    }
}

/// Minimum of a set function with its inclusion-minimal and -maximal minimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfmResult {
    pub value: f64,
    pub minimal: u64,
    pub maximal: u64,
}

/// Minimizes `g` over all subsets of `{0, …, d-1}` given as bitmasks.
pub fn brute_sfm(d: usize, g: &dyn Fn(u64) -> f64, budget: &OracleBudget) -> Result<SfmResult> {
    if d > budget.max_d {
        return Err(Error::Budget(format!("d = {d} exceeds the oracle limit {}", budget.max_d)));
    }
    budget.check_nodes(d, "submodular minimization")?;
    let vals: Vec<f64> = (0..1u64 << d).map(g).collect();
    let best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let optimal: Vec<u64> = (0..1u64 << d).filter(|&m| vals[m as usize] <= best + ORACLE_TIE).collect();
    let meet = optimal.iter().fold(u64::MAX >> (64 - d.max(1)), |a, &m| a & m) & ((1u64 << d) - 1);
    let join = optimal.iter().fold(0, |a, &m| a | m);
    let pick = |cand: u64, better: &dyn Fn(u32, u32) -> bool| {
        if vals[cand as usize] <= best + ORACLE_TIE {
            cand
        } else {
            *optimal.iter().reduce(|a, b| if better(b.count_ones(), a.count_ones()) { b } else { a }).unwrap()
        }
    };
    Ok(SfmResult { value: best, minimal: pick(meet, &|x, y| x < y), maximal: pick(join, &|x, y| x > y) })
}

/// Dual solution by recursive decomposition with exhaustive minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleProx {
    pub w: Vec<f64>,
    pub tau: Vec<f64>,
}

/// Solves the same dual as [`crate::prox::prox`] without any flow computation.
///
/// On ground set `U` over base `B`, α is balanced so that `Σ_{U} φ_i(α) = F(B ∪ U) - F(B)`.
/// If some `A ⊂ U` has `F(B ∪ A) - F(B) < Σ_A φ_i(α)` the problem splits into `A`
/// over `B` and `U ∖ A` over `B ∪ A`; otherwise `τ_i = φ_i(α)` on `U`.
pub fn decomposition_prox(problem: &ProxProblem, budget: &OracleBudget) -> Result<OracleProx> {
    let setup = DualSetup::new(problem)?;
    let d = problem.z.len();
    if d > budget.max_d {
        return Err(Error::Budget(format!("d = {d} exceeds the oracle limit {}", budget.max_d)));
    }
    let mut tau = vec![f64::NAN; d];
    decompose(&setup.shifted, &setup.curves, 0, (0..d).collect(), &mut tau, budget, 0)?;
    let (w, tau) = setup.primal(problem, &tau);
    Ok(OracleProx { w, tau })
}

fn decompose(
    f: &SetFunction,
    curves: &[NodeCurve],
    base: u64,
    ground: Vec<usize>,
    tau: &mut [f64],
    budget: &OracleBudget,
    depth: usize,
) -> Result<()> {
    if ground.is_empty() {
        return Ok(());
    }
    if depth > f.dim() + 1 {
        return Err(Error::Internal("decomposition does not terminate".into()));
    }
    let full = ground.iter().fold(base, |m, &i| m | 1 << i);
    let fb = f.eval_bits(base);
    let target = f.eval_bits(full) - fb;
    let cs: Vec<&NodeCurve> = ground.iter().map(|&i| &curves[i]).collect();
    let bal = solve_balance(&cs, target);
    let phis: Vec<f64> = cs.iter().map(|c| c.value(bal.alpha)).collect();
    let lift = |m: u64| (0..ground.len()).filter(|&k| m >> k & 1 == 1).fold(base, |acc, k| acc | 1 << ground[k]);
    let g = |m: u64| {
        let lin: f64 = (0..ground.len()).filter(|&k| m >> k & 1 == 1).map(|k| phis[k]).sum();
        f.eval_bits(lift(m)) - fb - lin
    };
    let res = brute_sfm(ground.len(), &g, budget)?;
    let scale = target.abs().max(1.0);
    let all = (1u64 << ground.len()) - 1;
    if bal.degenerate || res.value >= -1e-11 * scale || res.minimal == 0 || res.minimal == all {
        for (k, &i) in ground.iter().enumerate() {
            tau[i] = phis[k];
        }
        return Ok(());
    }
    let inner: Vec<usize> = (0..ground.len()).filter(|&k| res.minimal >> k & 1 == 1).map(|k| ground[k]).collect();
    let outer: Vec<usize> = (0..ground.len()).filter(|&k| res.minimal >> k & 1 == 0).map(|k| ground[k]).collect();
    let next_base = lift(res.minimal);
    decompose(f, curves, base, inner, tau, budget, depth + 1)?;
    decompose(f, curves, next_base, outer, tau, budget, depth + 1)
}

fn finite_cap(a: &crate::netrep::Arc) -> Result<f64> {
    match a.cap {
        Capacity::Finite(c) => Ok(c),
        Capacity::Infinite => Ok(f64::INFINITY),
        Capacity::Param(_) => Err(Error::Input("network has parametric arcs; instantiate them first".into())),
    }
}

/// Cut capacity split into its finite part and the number of infinite arcs crossing it.
#[derive(Clone, Copy, Default)]
struct CutValue {
    finite: f64,
    infinite: i64,
}

impl CutValue {
    fn add(&mut self, c: f64, sign: f64) {
        if c.is_infinite() {
            self.infinite += sign as i64;
        } else {
            self.finite += sign * c;
        }
    }

    fn value(&self) -> f64 {
        if self.infinite > 0 {
            f64::INFINITY
        } else {
            self.finite
        }
    }
}

/// `min_{Y ⊆ W} κ({s} ∪ A ∪ Y)` for every `A ⊆ V`, indexed by bitmask.
fn represented_table(net: &FlowNetwork, budget: &OracleBudget) -> Result<Vec<f64>> {
    let (d, aux) = (net.dim(), net.aux_count());
    if d > budget.max_d {
        return Err(Error::Budget(format!("d = {d} exceeds the oracle limit {}", budget.max_d)));
    }
    budget.check_nodes(d + aux, "representation check")?;
    let caps: Vec<f64> = net.arcs().iter().map(finite_cap).collect::<Result<_>>()?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); aux];
    for (k, a) in net.arcs().iter().enumerate() {
        for v in [a.tail, a.head] {
            if v >= 2 + d {
                incident[v - 2 - d].push(k);
            }
        }
    }
    let mut side = vec![false; net.node_count()];
    side[0] = true;
    let mut table = vec![0.0; 1 << d];
    for (bits, out) in table.iter_mut().enumerate() {
        for i in 0..d {
            side[2 + i] = bits >> i & 1 == 1;
        }
        for j in 0..aux {
            side[2 + d + j] = false;
        }
        let mut cut = CutValue::default();
        for (a, &c) in net.arcs().iter().zip(&caps) {
            if side[a.tail] && !side[a.head] {
                cut.add(c, 1.0);
            }
        }
        let mut best = cut.value();
        for step in 1u64..1 << aux {
            let j = step.trailing_zeros() as usize;
            let v = 2 + d + j;
            for &k in &incident[j] {
                let a = &net.arcs()[k];
                if side[a.tail] && !side[a.head] {
                    cut.add(caps[k], -1.0);
                }
            }
            side[v] = !side[v];
            for &k in &incident[j] {
                let a = &net.arcs()[k];
                if side[a.tail] && !side[a.head] {
                    cut.add(caps[k], 1.0);
                }
            }
            best = best.min(cut.value());
        }
        *out = best + net.offset();
    }
    Ok(table)
}

/// Checks `min_Y κ({s} ∪ A ∪ Y) + C = F(A)` for every `A ⊆ V` to within `1e-9`.
pub fn verify_representation(net: &FlowNetwork, f: &SetFunction) -> Result<bool> {
    if net.dim() != f.dim() {
        return Err(Error::Input(format!("network has d = {}, function has d = {}", net.dim(), f.dim())));
    }
    let table = represented_table(net, &OracleBudget::default())?;
    Ok(table.iter().enumerate().all(|(bits, &v)| (v - f.eval_bits(bits as u64)).abs() <= 1e-9))
}

/// Minimum cut value and the complete family of optimal source sides.
#[derive(Debug, Clone, PartialEq)]
pub struct MincutFamily {
    pub value: f64,
    /// Source-side masks over all nodes, `s` included.
    pub optimal: Vec<Vec<bool>>,
    pub minimal: Vec<bool>,
    pub maximal: Vec<bool>,
}

impl MincutFamily {
    pub fn contains(&self, mask: &[bool]) -> bool {
        self.optimal.iter().any(|m| m.as_slice() == mask)
    }
}

/// Enumerates every `s`-`t` cut; parametric arcs take the values of `param`.
pub fn brute_mincut(net: &FlowNetwork, param: &dyn Fn(usize) -> f64, budget: &OracleBudget) -> Result<MincutFamily> {
    let inner = net.node_count() - 2;
    budget.check_nodes(inner, "cut enumeration")?;
    let mask_of = |bits: u64| -> Vec<bool> {
        let mut m = vec![false; inner + 2];
        m[0] = true;
        for v in 0..inner {
            m[2 + v] = bits >> v & 1 == 1;
        }
        m
    };
    let vals: Vec<f64> = (0..1u64 << inner).map(|b| net.cut_capacity(&mask_of(b), param)).collect();
    let value = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if value.is_infinite() {
        return Err(Error::Input("every cut has infinite capacity".into()));
    }
    let opt: Vec<u64> = (0..1u64 << inner).filter(|&b| vals[b as usize] <= value + 1e-9).collect();
    let meet = opt.iter().fold(u64::MAX, |a, &b| a & b) & ((1u64 << inner) - 1);
    let join = opt.iter().fold(0, |a, &b| a | b);
    Ok(MincutFamily {
        value,
        optimal: opt.iter().map(|&b| mask_of(b)).collect(),
        minimal: mask_of(meet),
        maximal: mask_of(join),
    })
}

/// Piecewise-linear increasing function stored by its knots.
struct Derivative {
    xs: Vec<f64>,
    ys: Vec<f64>,
    left: f64,
    right: f64,
}

impl Derivative {
    fn solve(&self, y: f64) -> f64 {
        let n = self.xs.len();
        if y <= self.ys[0] {
            return if self.left > 0.0 { self.xs[0] + (y - self.ys[0]) / self.left } else { self.xs[0] };
        }
        if y >= self.ys[n - 1] {
            return if self.right > 0.0 { self.xs[n - 1] + (y - self.ys[n - 1]) / self.right } else { self.xs[n - 1] };
        }
        let k = self.ys.partition_point(|&v| v < y);
        let (x0, x1, y0, y1) = (self.xs[k - 1], self.xs[k], self.ys[k - 1], self.ys[k]);
        if y1 == y0 {
            x0
        } else {
            x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        }
    }
}

/// Exact 1-D total-variation prox `argmin ½‖z - w‖² + λ Σ_k a_k |w_{k+1} - w_k|`
/// by dynamic programming on the derivative of the value function.
pub fn fused_1d_oracle(z: &[f64], lambda: f64, weights: &[f64]) -> Result<Vec<f64>> {
    let n = z.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if weights.len() + 1 != n {
        return Err(Error::Input(format!("{} chain weights for {n} points", weights.len())));
    }
    if !(lambda >= 0.0) || weights.iter().any(|&a| !(a >= 0.0)) || z.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("fused oracle needs finite z and nonnegative λ, weights".into()));
    }
    let mut der = Derivative { xs: vec![z[0]], ys: vec![0.0], left: 1.0, right: 1.0 };
    let mut bounds = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let mu = lambda * weights[k];
        let lo = der.solve(-mu);
        let hi = der.solve(mu);
        bounds.push((lo, hi));
        let (mut xs, mut ys) = (vec![lo], vec![-mu]);
        if hi > lo {
            for (&x, &y) in der.xs.iter().zip(&der.ys) {
                if x > lo && x < hi {
                    xs.push(x);
                    ys.push(y);
                }
            }
            xs.push(hi);
            ys.push(mu);
        }
        for (x, y) in xs.iter().zip(ys.iter_mut()) {
            *y += x - z[k + 1];
        }
        der = Derivative { xs, ys, left: 1.0, right: 1.0 };
    }
    let mut w = vec![0.0; n];
    w[n - 1] = der.solve(0.0);
    for k in (0..n - 1).rev() {
        let (lo, hi) = bounds[k];
        w[k] = w[k + 1].clamp(lo, hi);
    }
    Ok(w)
}
