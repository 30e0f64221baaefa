//! Proximal operator of `λ Ω_{F,p}` through the separable dual problem.
//!
//! The dual minimizes `Σ_i ψ_i(τ_i)` over the base polytope of a
//! nondecreasing function. Each `ψ_i` is convex with a closed-form
//! derivative, and its inverse derivative `φ_i` becomes the parametric source
//! capacity of data node `i` in the flow network.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maxflow::{Counters, FlowOptions};
use crate::netrep::{make_nondecreasing, represent, NondecreasingShift};
use crate::paraflow::{self, Curve, NodeCurve, ParametricProblem};
use crate::setfn::{Kind, SetFunction};

/// Exponent `p` of the penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Conjugate exponent `r` with `1/p + 1/r = 1`.
    pub fn conjugate(&self) -> f64 {
        match *self {
            Exponent::Infinity => 1.0,
            Exponent::Finite(p) => p / (p - 1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Exponent::Finite(p) if !(p > 1.0 && p.is_finite()) => {
                Err(Error::Input(format!("exponent p must lie in (1, ∞], got {p}")))
            }
            _ => Ok(()),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| Error::Input(format!("bad exponent '{s}'")))?;
                let e = Exponent::Finite(p);
                e.validate()?;
                Ok(e)
            }
        }
    }
}

/// One coordinate of the dual: `ψ(τ) = -min_w { ½(w - z)² + λ τ^{1/r} |w| }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparablePiece {
    pub z: f64,
    pub lambda: f64,
    pub r: f64,
}

impl SeparablePiece {
    pub fn new(z: f64, lambda: f64, r: f64) -> Result<Self> {
        if !z.is_finite() || !(lambda > 0.0 && lambda.is_finite()) || !(r >= 1.0 && r.is_finite()) {
            return Err(Error::Input(format!("invalid piece z = {z}, λ = {lambda}, r = {r}")));
        }
        Ok(SeparablePiece { z, lambda, r })
    }

    /// `T = (|z|/λ)^r`, where the dual stops decreasing.
    pub fn threshold(&self) -> f64 {
        (self.z.abs() / self.lambda).powf(self.r)
    }

    pub fn psi(&self, tau: f64) -> Result<f64> {
        if !(tau >= 0.0) {
            return Err(Error::Domain(format!("ψ needs τ ≥ 0, got {tau}")));
        }
        let (l, a) = (self.lambda, self.z.abs());
        if tau >= self.threshold() {
            return Ok(-0.5 * a * a);
        }
        let u = tau.powf(1.0 / self.r);
        Ok(0.5 * l * l * u * u - l * a * u)
    }

    pub fn psi_prime(&self, tau: f64) -> Result<f64> {
        if !(tau >= 0.0) {
            return Err(Error::Domain(format!("ψ' needs τ ≥ 0, got {tau}")));
        }
        Ok(self.psi_prime_unchecked(tau))
    }

    fn psi_prime_unchecked(&self, tau: f64) -> f64 {
        let (l, a, r) = (self.lambda, self.z.abs(), self.r);
        if a == 0.0 || tau >= self.threshold() {
            return 0.0;
        }
        if r == 1.0 {
            return l * (l * tau - a);
        }
        if tau == 0.0 {
            return f64::NEG_INFINITY;
        }
        (l * l * tau.powf(1.0 / r) - l * a) / (r * tau.powf(1.0 - 1.0 / r))
    }

    /// Inverse of `ψ'` on `α ≤ 0`, with `φ(0) = T`.
    pub fn phi(&self, alpha: f64) -> Result<f64> {
        if !(alpha <= 0.0) {
            return Err(Error::Domain(format!("φ needs α ≤ 0, got {alpha}")));
        }
        Ok(self.phi_nonpositive(alpha))
    }

    fn phi_nonpositive(&self, alpha: f64) -> f64 {
        let (l, a, r) = (self.lambda, self.z.abs(), self.r);
        let t = self.threshold();
        if alpha == 0.0 {
            return t;
        }
        if alpha == f64::NEG_INFINITY || a == 0.0 {
            return 0.0;
        }
        if r == 1.0 {
            return (alpha / (l * l) + a / l).clamp(0.0, t);
        }
        if r == 2.0 {
            let den = l * l - 2.0 * alpha;
            return (l * l * a * a / (den * den)).clamp(0.0, t);
        }
        // ψ' is increasing on [0, T]; bisect.
        let (mut lo, mut hi) = (0.0f64, t);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.psi_prime_unchecked(mid) < alpha {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `φ` continued past `α = 0` by `T + α`; the continuation adds
    /// `½(τ - T)₊²` to `ψ`, which leaves the dual optimum unchanged.
    pub(crate) fn phi_ext(&self, alpha: f64) -> f64 {
        if alpha > 0.0 {
            self.threshold() + alpha
        } else {
            self.phi_nonpositive(alpha)
        }
    }

    /// Inverse of [`SeparablePiece::phi_ext`]; the largest α when φ is flat.
    pub(crate) fn psi_prime_ext(&self, tau: f64) -> f64 {
        let t = self.threshold();
        if tau > t {
            return tau - t;
        }
        self.psi_prime_unchecked(tau.max(0.0))
    }
}

/// Which dual is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// Nondecreasing `F`: `Ω(w) = sup_{τ ∈ P₊(F)} Σ τ_i^{1/r} |w_i|`-type norm, thresholded recovery.
    Norm,
    /// Non-monotone `F` with `p = ∞`: the Lovász extension `f(w)`, recovered as `w = z - λτ`.
    Lovasz,
}

/// Input of [`prox`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProxProblem {
    pub z: Vec<f64>,
    pub lambda: f64,
    pub p: Exponent,
    pub penalty: SetFunction,
}

impl ProxProblem {
    pub fn new(z: Vec<f64>, lambda: f64, p: Exponent, penalty: SetFunction) -> Result<Self> {
        let pb = ProxProblem { z, lambda, p, penalty };
        pb.validate()?;
        Ok(pb)
    }

    pub fn validate(&self) -> Result<()> {
        self.p.validate()?;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Input(format!("λ must be positive and finite, got {}", self.lambda)));
        }
        if self.z.len() != self.penalty.dim() {
            return Err(Error::Input(format!(
                "z has length {} but the penalty lives on d = {}",
                self.z.len(),
                self.penalty.dim()
            )));
        }
        if self.z.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("z must be finite".into()));
        }
        Ok(())
    }

    pub fn r(&self) -> f64 {
        self.p.conjugate()
    }
}

/// Regime, shifted function and per-node curves shared by every solver of the dual.
#[derive(Debug, Clone)]
pub struct DualSetup {
    pub regime: Regime,
    pub shifted: SetFunction,
    pub shift: NondecreasingShift,
    pub curves: Vec<NodeCurve>,
}

impl DualSetup {
    pub fn new(problem: &ProxProblem) -> Result<Self> {
        problem.validate()?;
        let r = problem.r();
        let (shifted, shift) = make_nondecreasing(&problem.penalty, None)?;
        let lambda = problem.lambda;
        let (regime, offsets) = if shift.is_identity() || r != 1.0 {
            (Regime::Norm, vec![0.0; problem.z.len()])
        } else {
            (Regime::Lovasz, shift.offsets())
        };
        let curves = problem
            .z
            .iter()
            .zip(&offsets)
            .map(|(&z, &off)| {
                let curve = match regime {
                    Regime::Norm => Curve::Norm(SeparablePiece::new(z, lambda, r)?),
                    Regime::Lovasz => Curve::Signed { z, lambda },
                };
                Ok(NodeCurve { curve, shift: off })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DualSetup { regime, shifted, shift, curves })
    }

    /// Primal point from a dual solution of the shifted problem.
    pub fn primal(&self, problem: &ProxProblem, shifted_tau: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let tau: Vec<f64> = shifted_tau.iter().zip(&self.curves).map(|(t, c)| t - c.shift).collect();
        let r = problem.r();
        let w = problem
            .z
            .iter()
            .zip(&tau)
            .map(|(&z, &t)| match self.regime {
                Regime::Lovasz => z - problem.lambda * t,
                Regime::Norm => threshold_recover(z, problem.lambda, r, t),
            })
            .collect();
        (w, tau)
    }
}

/// `w = z - sign(z) λ max(τ, 0)^{1/r}` below the threshold, `0` from it on.
pub fn threshold_recover(z: f64, lambda: f64, r: f64, tau: f64) -> f64 {
    let t = (z.abs() / lambda).powf(r);
    if tau >= t {
        return 0.0;
    }
    let sign = if z > 0.0 {
        1.0
    } else if z < 0.0 {
        -1.0
    } else {
        0.0
    };
    z - sign * lambda * tau.max(0.0).powf(1.0 / r)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ProxOptions {
    pub flow: FlowOptions,
}

/// Diagnostics of one [`prox`] call.
#[derive(Debug, Clone, Serialize)]
pub struct ProxReport {
    pub regime: Regime,
    pub beta: f64,
    pub breakpoints: Vec<f64>,
    pub levels: usize,
    pub alpha_bounds: (f64, f64),
    pub counters: Counters,
    pub flow_solves: usize,
    pub aux_nodes: usize,
    pub arcs: usize,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct ProxSolution {
    pub w: Vec<f64>,
    pub tau: Vec<f64>,
    pub report: ProxReport,
}

/// `argmin_w ½‖z - w‖² + λ Ω_{F,p}(w)`.
pub fn prox(problem: &ProxProblem) -> Result<ProxSolution> {
    prox_with(problem, &ProxOptions::default())
}

pub fn prox_with(problem: &ProxProblem, opts: &ProxOptions) -> Result<ProxSolution> {
    let start = Instant::now();
    let setup = DualSetup::new(problem)?;
    let network = represent(&setup.shifted).map_err(|e| match e {
        Error::Construction(m) => Error::Unsupported(m),
        other => other,
    })?;
    let (aux_nodes, arcs) = (network.aux_count(), network.arcs().len());
    let para = ParametricProblem::new(network, setup.curves.clone())?;
    let solved = paraflow::solve(&para, &opts.flow)?;
    let shifted_tau = paraflow::recover_tau(&solved.chain, &setup.shifted, &setup.curves)?;
    let (w, tau) = setup.primal(problem, &shifted_tau);
    let report = ProxReport {
        regime: setup.regime,
        beta: setup.shift.beta,
        breakpoints: solved.chain.breakpoints.clone(),
        levels: solved.chain.sets.len(),
        alpha_bounds: para.alpha_bounds(),
        counters: solved.counters,
        flow_solves: solved.flow_solves,
        aux_nodes,
        arcs,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(ProxSolution { w, tau, report })
}

fn check_cubic(f: &SetFunction) -> Result<()> {
    match f.kind() {
        Kind::CubicMobius(t) if t.max_second_difference() > 1e-9 => {
            Err(Error::Unsupported("cubic penalty is not submodular".into()))
        }
        Kind::Sum(parts) => parts.iter().try_for_each(check_cubic),
        Kind::Shifted { base, .. } => check_cubic(base),
        _ => Ok(()),
    }
}

/// Whether the shift of [`make_nondecreasing`] is the identity for `f`.
pub fn is_nondecreasing(f: &SetFunction) -> bool {
    make_nondecreasing(f, None).map(|(_, s)| s.is_identity()).unwrap_or(false)
}

/// `Ω_{F,∞}(w)`: the Lovász extension at `|w|` for nondecreasing `F`, at `w` otherwise.
pub fn penalty_value_linf(w: &[f64], f: &SetFunction) -> Result<f64> {
    check_cubic(f)?;
    if w.len() != f.dim() {
        return Err(Error::Input(format!("vector has length {}, expected {}", w.len(), f.dim())));
    }
    match f.kind() {
        Kind::GraphCut(edges) => Ok(edges.iter().map(|e| e.weight * (w[e.i] - w[e.j]).abs()).sum()),
        Kind::HypergraphCut(hs) => Ok(hs
            .iter()
            .map(|h| {
                let vals = h.members.iter().map(|&i| w[i]);
                let hi = vals.clone().fold(f64::NEG_INFINITY, f64::max);
                let lo = vals.fold(f64::INFINITY, f64::min);
                h.weight * (hi - lo)
            })
            .sum()),
        _ if is_nondecreasing(f) => {
            let abs: Vec<f64> = w.iter().map(|v| v.abs()).collect();
            f.lovasz(&abs)
        }
        _ => f.lovasz(w),
    }
}
