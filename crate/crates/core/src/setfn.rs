//! Set functions behind the penalties.
//!
//! A [`SetFunction`] is an immutable description of `F : 2^V -> R` with
//! `F(∅) = 0`. Besides plain evaluation it provides Möbius coefficients
//! ([`SetFunction::mobius`]), the Lovász extension ([`SetFunction::lovasz`])
//! and an exhaustive submodularity check for small ground sets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Absolute tolerance of the brute-force submodularity check.
pub const SUBMODULAR_TOL: f64 = 1e-9;
/// Largest ground set handled by the generic 2^d Möbius inversion.
pub const MAX_MOBIUS_DIM: usize = 20;
/// Largest ground set accepted by [`SetFunction::is_submodular`].
pub const MAX_SUBMODULAR_DIM: usize = 12;

/// Weighted group `w_g · min(|A ∩ g|, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub weight: f64,
    pub members: Vec<usize>,
}

impl Group {
    pub fn new(weight: f64, members: impl Into<Vec<usize>>) -> Self {
        Group { weight, members: members.into() }
    }
}

/// Undirected edge of a cut function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(i: usize, j: usize, weight: f64) -> Self {
        Edge { i, j, weight }
    }
}

/// Hyperedge of a hypergraph cut function.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    pub weight: f64,
    pub members: Vec<usize>,
}

impl Hyperedge {
    pub fn new(weight: f64, members: impl Into<Vec<usize>>) -> Self {
        Hyperedge { weight, members: members.into() }
    }
}

/// Möbius coefficients of an order-3 function. Keys are stored sorted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CubicTerms {
    pub linear: BTreeMap<usize, f64>,
    pub pairs: BTreeMap<(usize, usize), f64>,
    pub triples: BTreeMap<(usize, usize, usize), f64>,
}

impl CubicTerms {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn linear(mut self, i: usize, c: f64) -> Self {
        *self.linear.entry(i).or_insert(0.0) += c;
        self
    }

    pub fn pair(mut self, i: usize, j: usize, c: f64) -> Self {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        *self.pairs.entry((a, b)).or_insert(0.0) += c;
        self
    }

    pub fn triple(mut self, i: usize, j: usize, k: usize, c: f64) -> Self {
        let mut t = [i, j, k];
        t.sort_unstable();
        *self.triples.entry((t[0], t[1], t[2])).or_insert(0.0) += c;
        self
    }

    /// Largest second difference `F2(uv) + Σ_w max(F3(uvw), 0)` over all pairs.
    ///
    /// The function is submodular iff this is `≤ 0`.
    pub fn max_second_difference(&self) -> f64 {
        let mut worst: BTreeMap<(usize, usize), f64> = self.pairs.clone();
        for (&(a, b, c), &v) in &self.triples {
            if v > 0.0 {
                for key in [(a, b), (a, c), (b, c)] {
                    *worst.entry(key).or_insert(0.0) += v;
                }
            }
        }
        worst.values().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// The structural variants a [`SetFunction`] can take.
#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    GroupCover(Vec<Group>),
    GraphCut(Vec<Edge>),
    HypergraphCut(Vec<Hyperedge>),
    CubicMobius(CubicTerms),
    WeightedTruncation { weights: Vec<f64>, cap: f64 },
    Sum(Vec<SetFunction>),
    Shifted { base: Box<SetFunction>, beta: f64, b: Vec<f64> },
}

/// A normalized set function on the ground set `{0, .., d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFunction {
    dim: usize,
    kind: Kind,
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::Input("ground set must be nonempty".into()));
    }
    Ok(())
}

fn check_weight(w: f64, what: &str) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(Error::Input(format!("{what} weight must be finite and nonnegative, got {w}")));
    }
    Ok(())
}

fn normalize_members(d: usize, members: &[usize]) -> Result<Vec<usize>> {
    let mut m = members.to_vec();
    m.sort_unstable();
    m.dedup();
    if let Some(&last) = m.last() {
        if last >= d {
            return Err(Error::Input(format!("index {last} out of range for d = {d}")));
        }
    }
    Ok(m)
}

impl SetFunction {
    /// `Σ_g w_g min(|A ∩ g|, 1)`. Zero-weight and empty groups are dropped.
    pub fn group_cover(d: usize, groups: Vec<Group>) -> Result<Self> {
        check_dim(d)?;
        let mut kept = Vec::with_capacity(groups.len());
        for g in groups {
            check_weight(g.weight, "group")?;
            let members = normalize_members(d, &g.members)?;
            if g.weight > 0.0 && !members.is_empty() {
                kept.push(Group { weight: g.weight, members });
            }
        }
        Ok(SetFunction { dim: d, kind: Kind::GroupCover(kept) })
    }

    /// `F(A) = w|A|`, the ℓ1 case written as singleton groups.
    pub fn singletons(d: usize, weight: f64) -> Result<Self> {
        Self::group_cover(d, (0..d).map(|i| Group::new(weight, vec![i])).collect())
    }

    /// Undirected cut function. Self loops and zero weights are dropped.
    pub fn graph_cut(d: usize, edges: Vec<Edge>) -> Result<Self> {
        check_dim(d)?;
        let mut kept = Vec::with_capacity(edges.len());
        for e in edges {
            check_weight(e.weight, "edge")?;
            if e.i >= d || e.j >= d {
                return Err(Error::Input(format!("edge ({}, {}) out of range for d = {d}", e.i, e.j)));
            }
            if e.i != e.j && e.weight > 0.0 {
                kept.push(e);
            }
        }
        Ok(SetFunction { dim: d, kind: Kind::GraphCut(kept) })
    }

    /// Unit-weight path `0 - 1 - ... - (d-1)`.
    pub fn chain(d: usize, weights: &[f64]) -> Result<Self> {
        if weights.len() + 1 != d {
            return Err(Error::Input(format!("chain on {d} nodes needs {} weights", d.saturating_sub(1))));
        }
        Self::graph_cut(d, weights.iter().enumerate().map(|(i, &w)| Edge::new(i, i + 1, w)).collect())
    }

    /// Hypergraph cut `Σ_e a_e [e ∩ A ≠ ∅ ≠ e ∖ A]`.
    pub fn hypergraph_cut(d: usize, hyperedges: Vec<Hyperedge>) -> Result<Self> {
        check_dim(d)?;
        let mut kept = Vec::with_capacity(hyperedges.len());
        for h in hyperedges {
            check_weight(h.weight, "hyperedge")?;
            let members = normalize_members(d, &h.members)?;
            if h.weight > 0.0 && members.len() >= 2 {
                kept.push(Hyperedge { weight: h.weight, members });
            }
        }
        Ok(SetFunction { dim: d, kind: Kind::HypergraphCut(kept) })
    }

    /// Function of order at most three given by its Möbius coefficients.
    pub fn cubic(d: usize, terms: CubicTerms) -> Result<Self> {
        check_dim(d)?;
        let finite = terms.linear.values().chain(terms.pairs.values()).chain(terms.triples.values());
        if finite.clone().any(|c| !c.is_finite()) {
            return Err(Error::Input("cubic coefficients must be finite".into()));
        }
        let too_big = terms.linear.keys().any(|&i| i >= d)
            || terms.pairs.keys().any(|&(i, j)| i >= d || j >= d || i == j)
            || terms.triples.keys().any(|&(i, j, k)| k >= d || i == j || j == k);
        if too_big {
            return Err(Error::Input(format!("cubic term index out of range or repeated for d = {d}")));
        }
        Ok(SetFunction { dim: d, kind: Kind::CubicMobius(terms) })
    }

    /// `min(w(A), cap)`.
    pub fn truncation(weights: Vec<f64>, cap: f64) -> Result<Self> {
        check_dim(weights.len())?;
        for &w in &weights {
            check_weight(w, "truncation")?;
        }
        check_weight(cap, "truncation cap")?;
        Ok(SetFunction { dim: weights.len(), kind: Kind::WeightedTruncation { weights, cap } })
    }

    pub fn sum(parts: Vec<SetFunction>) -> Result<Self> {
        let d = parts
            .first()
            .map(|p| p.dim)
            .ok_or_else(|| Error::Input("sum needs at least one part".into()))?;
        if parts.iter().any(|p| p.dim != d) {
            return Err(Error::Input("sum parts disagree on the ground set".into()));
        }
        Ok(SetFunction { dim: d, kind: Kind::Sum(parts) })
    }

    /// `F(A) + β b(A)`.
    pub fn shifted(base: SetFunction, beta: f64, b: Vec<f64>) -> Result<Self> {
        if b.len() != base.dim {
            return Err(Error::Input("shift vector length differs from d".into()));
        }
        if !beta.is_finite() || b.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Input("shift must be finite with b ≥ 0".into()));
        }
        Ok(SetFunction { dim: base.dim, kind: Kind::Shifted { base: Box::new(base), beta, b } })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// `F(A)` for an index set.
    pub fn eval(&self, set: &[usize]) -> Result<f64> {
        let mut mask = vec![false; self.dim];
        for &i in set {
            if i >= self.dim {
                return Err(Error::Input(format!("index {i} out of range for d = {}", self.dim)));
            }
            mask[i] = true;
        }
        Ok(self.eval_mask(&mask))
    }

    /// `F(A)` for a membership mask of length `d`.
    pub fn eval_mask(&self, mask: &[bool]) -> f64 {
        debug_assert_eq!(mask.len(), self.dim);
        self.eval_by(&|i| mask[i])
    }

    /// `F(A)` where bit `i` of `bits` marks membership (`d ≤ 64`).
    pub fn eval_bits(&self, bits: u64) -> f64 {
        debug_assert!(self.dim <= 64);
        self.eval_by(&|i| bits >> i & 1 == 1)
    }

    fn eval_by(&self, inside: &dyn Fn(usize) -> bool) -> f64 {
        match &self.kind {
            Kind::GroupCover(groups) => groups
                .iter()
                .filter(|g| g.members.iter().any(|&i| inside(i)))
                .map(|g| g.weight)
                .sum(),
            Kind::GraphCut(edges) => edges
                .iter()
                .filter(|e| inside(e.i) != inside(e.j))
                .map(|e| e.weight)
                .sum(),
            Kind::HypergraphCut(hs) => hs
                .iter()
                .filter(|h| {
                    let k = h.members.iter().filter(|&&i| inside(i)).count();
                    k > 0 && k < h.members.len()
                })
                .map(|h| h.weight)
                .sum(),
            Kind::CubicMobius(t) => {
                let mut v = 0.0;
                for (&i, &c) in &t.linear {
                    if inside(i) {
                        v += c;
                    }
                }
                for (&(i, j), &c) in &t.pairs {
                    if inside(i) && inside(j) {
                        v += c;
                    }
                }
                for (&(i, j, k), &c) in &t.triples {
                    if inside(i) && inside(j) && inside(k) {
                        v += c;
                    }
                }
                v
            }
            Kind::WeightedTruncation { weights, cap } => {
                let w: f64 = (0..self.dim).filter(|&i| inside(i)).map(|i| weights[i]).sum();
                w.min(*cap)
            }
            Kind::Sum(parts) => parts.iter().map(|p| p.eval_by(inside)).sum(),
            Kind::Shifted { base, beta, b } => {
                let lin: f64 = (0..self.dim).filter(|&i| inside(i)).map(|i| b[i]).sum();
                base.eval_by(inside) + beta * lin
            }
        }
    }

    /// Marginal gains `F(P_k) - F(P_{k-1})` along the prefixes `P_k` of `order`.
    pub fn prefix_gains(&self, order: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; order.len()];
        self.add_prefix_gains(order, &mut out);
        out
    }

    fn add_prefix_gains(&self, order: &[usize], out: &mut [f64]) {
        let d = self.dim;
        match &self.kind {
            Kind::GroupCover(groups) => {
                let mut of = vec![Vec::new(); d];
                for (g, grp) in groups.iter().enumerate() {
                    for &i in &grp.members {
                        of[i].push(g);
                    }
                }
                let mut hit = vec![false; groups.len()];
                for (k, &i) in order.iter().enumerate() {
                    for &g in &of[i] {
                        if !hit[g] {
                            hit[g] = true;
                            out[k] += groups[g].weight;
                        }
                    }
                }
            }
            Kind::GraphCut(edges) => {
                let mut adj = vec![Vec::new(); d];
                for e in edges {
                    adj[e.i].push((e.j, e.weight));
                    adj[e.j].push((e.i, e.weight));
                }
                let mut inside = vec![false; d];
                for (k, &i) in order.iter().enumerate() {
                    out[k] += adj[i].iter().map(|&(j, a)| if inside[j] { -a } else { a }).sum::<f64>();
                    inside[i] = true;
                }
            }
            Kind::HypergraphCut(hs) => {
                let mut of = vec![Vec::new(); d];
                for (e, h) in hs.iter().enumerate() {
                    for &i in &h.members {
                        of[i].push(e);
                    }
                }
                let mut count = vec![0usize; hs.len()];
                for (k, &i) in order.iter().enumerate() {
                    for &e in &of[i] {
                        let len = hs[e].members.len();
                        let c = count[e];
                        let before = c > 0 && c < len;
                        let after = c + 1 < len;
                        out[k] += hs[e].weight * (after as i32 - before as i32) as f64;
                        count[e] += 1;
                    }
                }
            }
            Kind::CubicMobius(t) => {
                let mut pairs_of = vec![Vec::new(); d];
                for (&(i, j), &c) in &t.pairs {
                    pairs_of[i].push((j, c));
                    pairs_of[j].push((i, c));
                }
                let mut triples_of = vec![Vec::new(); d];
                for (&(i, j, l), &c) in &t.triples {
                    triples_of[i].push((j, l, c));
                    triples_of[j].push((i, l, c));
                    triples_of[l].push((i, j, c));
                }
                let mut inside = vec![false; d];
                for (k, &i) in order.iter().enumerate() {
                    let mut g = t.linear.get(&i).copied().unwrap_or(0.0);
                    g += pairs_of[i].iter().filter(|p| inside[p.0]).map(|p| p.1).sum::<f64>();
                    g += triples_of[i]
                        .iter()
                        .filter(|p| inside[p.0] && inside[p.1])
                        .map(|p| p.2)
                        .sum::<f64>();
                    out[k] += g;
                    inside[i] = true;
                }
            }
            Kind::WeightedTruncation { weights, cap } => {
                let mut s = 0.0;
                for (k, &i) in order.iter().enumerate() {
                    let next = s + weights[i];
                    out[k] += next.min(*cap) - s.min(*cap);
                    s = next;
                }
            }
            Kind::Sum(parts) => {
                for p in parts {
                    p.add_prefix_gains(order, out);
                }
            }
            Kind::Shifted { base, beta, b } => {
                base.add_prefix_gains(order, out);
                for (k, &i) in order.iter().enumerate() {
                    out[k] += beta * b[i];
                }
            }
        }
    }

    /// Lovász extension `f(w)`.
    pub fn lovasz(&self, w: &[f64]) -> Result<f64> {
        if w.len() != self.dim {
            return Err(Error::Input(format!("vector has length {}, expected {}", w.len(), self.dim)));
        }
        let order = descending_order(w);
        let gains = self.prefix_gains(&order);
        Ok(order.iter().zip(&gains).map(|(&i, g)| w[i] * g).sum())
    }

    /// Möbius coefficients, via a structured shortcut when one exists and the
    /// generic 2^d inversion otherwise.
    pub fn mobius(&self) -> Result<MobiusTable> {
        match self.mobius_structured()? {
            Some(t) => Ok(t),
            None => self.mobius_generic(),
        }
    }

    fn mobius_structured(&self) -> Result<Option<MobiusTable>> {
        let d = self.dim;
        let mut t = MobiusTable::empty(d);
        match &self.kind {
            Kind::GroupCover(groups) => {
                for g in groups {
                    add_cover_terms(&mut t, &g.members, g.weight)?;
                }
            }
            Kind::HypergraphCut(hs) => {
                for h in hs {
                    add_cover_terms(&mut t, &h.members, h.weight)?;
                    t.add(h.members.clone(), -h.weight);
                }
            }
            Kind::GraphCut(edges) => {
                for e in edges {
                    t.add(vec![e.i], e.weight);
                    t.add(vec![e.j], e.weight);
                    let (a, b) = if e.i < e.j { (e.i, e.j) } else { (e.j, e.i) };
                    t.add(vec![a, b], -2.0 * e.weight);
                }
            }
            Kind::CubicMobius(c) => {
                for (&i, &v) in &c.linear {
                    t.add(vec![i], v);
                }
                for (&(i, j), &v) in &c.pairs {
                    t.add(vec![i, j], v);
                }
                for (&(i, j, k), &v) in &c.triples {
                    t.add(vec![i, j, k], v);
                }
            }
            Kind::WeightedTruncation { .. } => return Ok(None),
            Kind::Sum(parts) => {
                for p in parts {
                    let pt = p.mobius()?;
                    for (k, v) in pt.coeffs {
                        t.add(k, v);
                    }
                }
            }
            Kind::Shifted { base, beta, b } => {
                let bt = base.mobius()?;
                for (k, v) in bt.coeffs {
                    t.add(k, v);
                }
                for (i, &bi) in b.iter().enumerate() {
                    t.add(vec![i], beta * bi);
                }
            }
        }
        Ok(Some(t))
    }

    fn mobius_generic(&self) -> Result<MobiusTable> {
        let d = self.dim;
        if d > MAX_MOBIUS_DIM {
            return Err(Error::Capacity(format!(
                "generic Möbius inversion needs d ≤ {MAX_MOBIUS_DIM}, got {d}"
            )));
        }
        let mut a: Vec<f64> = (0..1u64 << d).map(|m| self.eval_bits(m)).collect();
        let scale = a.iter().fold(1.0f64, |s, v| s.max(v.abs()));
        for bit in 0..d {
            let step = 1usize << bit;
            for m in 0..a.len() {
                if m & step != 0 {
                    a[m] -= a[m ^ step];
                }
            }
        }
        let mut t = MobiusTable::empty(d);
        for (m, &v) in a.iter().enumerate().skip(1) {
            if v.abs() > 1e-13 * scale {
                t.add(bits_to_set(m as u64, d), v);
            }
        }
        Ok(t)
    }

    /// Exhaustive submodularity check on `d ≤ 12`, absolute tolerance 1e-9.
    pub fn is_submodular(&self) -> Result<bool> {
        let d = self.dim;
        if d > MAX_SUBMODULAR_DIM {
            return Err(Error::Capacity(format!("submodularity check needs d ≤ {MAX_SUBMODULAR_DIM}, got {d}")));
        }
        let vals: Vec<f64> = (0..1u64 << d).map(|m| self.eval_bits(m)).collect();
        // Diminishing returns for every A and i ≠ j outside A is equivalent to
        // the pairwise inequality for all A, B.
        for a in 0..vals.len() {
            for i in 0..d {
                if a >> i & 1 == 1 {
                    continue;
                }
                for j in i + 1..d {
                    if a >> j & 1 == 1 {
                        continue;
                    }
                    let (ai, aj, aij) = (a | 1 << i, a | 1 << j, a | 1 << i | 1 << j);
                    if vals[ai] + vals[aj] < vals[a] + vals[aij] - SUBMODULAR_TOL {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `F(V ∖ {i}) - F(V)` for every `i`; all ≤ 0 means nondecreasing (for submodular F).
    pub fn top_gaps(&self) -> Vec<f64> {
        let d = self.dim;
        match &self.kind {
            Kind::GroupCover(_) | Kind::WeightedTruncation { .. } => return vec![0.0; d],
            _ => {}
        }
        let mut mask = vec![true; d];
        let full = self.eval_mask(&mask);
        (0..d)
            .map(|i| {
                mask[i] = false;
                let v = self.eval_mask(&mask) - full;
                mask[i] = true;
                v
            })
            .collect()
    }
}

/// Indices sorted by decreasing value, ties by increasing index.
pub fn descending_order(w: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    order
}

/// Sorted member list of a bitmask.
pub fn bits_to_set(bits: u64, d: usize) -> Vec<usize> {
    (0..d).filter(|&i| bits >> i & 1 == 1).collect()
}

fn add_cover_terms(t: &mut MobiusTable, members: &[usize], w: f64) -> Result<()> {
    // min(|A ∩ g|, 1) = 1 - Π_{i∈g}(1 - [i∈A]) expands to (-1)^{|Y|+1} on Y ⊆ g.
    let k = members.len();
    if k > MAX_MOBIUS_DIM {
        return Err(Error::Capacity(format!("group of size {k} has 2^{k} Möbius terms")));
    }
    for m in 1..1u64 << k {
        let sub: Vec<usize> = (0..k).filter(|&b| m >> b & 1 == 1).map(|b| members[b]).collect();
        let sign = if sub.len() % 2 == 1 { 1.0 } else { -1.0 };
        t.add(sub, sign * w);
    }
    Ok(())
}

/// Sparse Möbius coefficients `F^{(|Y|)}(Y)` keyed by sorted subsets `Y ≠ ∅`.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusTable {
    dim: usize,
    coeffs: BTreeMap<Vec<usize>, f64>,
}

impl MobiusTable {
    pub fn empty(dim: usize) -> Self {
        MobiusTable { dim, coeffs: BTreeMap::new() }
    }

    /// Accumulates `c` on subset `key` (sorted internally); exact zeros are removed.
    pub fn add(&mut self, mut key: Vec<usize>, c: f64) {
        key.sort_unstable();
        key.dedup();
        if key.is_empty() || c == 0.0 {
            return;
        }
        let slot = self.coeffs.entry(key.clone()).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.coeffs.remove(&key);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest degree with a nonzero coefficient (0 for the zero function).
    pub fn order(&self) -> usize {
        self.coeffs.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn get(&self, key: &[usize]) -> f64 {
        let mut k = key.to_vec();
        k.sort_unstable();
        self.coeffs.get(&k).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.coeffs.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Coefficients of one degree.
    pub fn of_order(&self, k: usize) -> impl Iterator<Item = (&[usize], f64)> {
        self.iter().filter(move |(key, _)| key.len() == k)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Reconstructs `F(A) = Σ_{Y ⊆ A} F^{(|Y|)}(Y)`.
    pub fn eval_mask(&self, mask: &[bool]) -> f64 {
        self.coeffs
            .iter()
            .filter(|(k, _)| k.iter().all(|&i| mask[i]))
            .map(|(_, v)| v)
            .sum()
    }
}
