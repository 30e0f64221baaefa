//! Accelerated proximal gradient (FISTA) for `½‖Xw - y‖² + λ Ω(w)`.

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prox::{penalty_value_linf, prox, Exponent, ProxProblem};
use crate::setfn::SetFunction;

#[derive(Debug, Clone)]
pub struct LeastSquaresTask {
    pub x: Array2<f64>,
    pub y: Array1<f64>,
    /// `λ = 0` gives plain least squares.
    pub lambda: f64,
    pub p: Exponent,
    pub penalty: SetFunction,
    pub max_iters: usize,
    pub tolerance: f64,
}

impl LeastSquaresTask {
    fn validate(&self) -> Result<()> {
        let (n, d) = self.x.dim();
        if self.y.len() != n {
            return Err(Error::Input(format!("design has {n} rows but the target has {} entries", self.y.len())));
        }
        if self.penalty.dim() != d {
            return Err(Error::Input(format!("design has {d} columns but the penalty lives on {}", self.penalty.dim())));
        }
        if self.x.iter().chain(self.y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Input("design and target must be finite".into()));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Input(format!("λ must be finite and ≥ 0, got {}", self.lambda)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Input("tolerance must be positive".into()));
        }
        self.p.validate()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FistaResult {
    pub w: Vec<f64>,
    /// Objective after every iteration; the first entry is at `w = 0`.
    pub objective: Vec<f64>,
    /// Set when the penalty value is unavailable and only the smooth part is traced.
    pub smooth_only: bool,
    pub iterations: usize,
    pub restarts: usize,
    pub lipschitz: f64,
    /// `‖w - prox(w - ∇l(w)/L)‖∞` at the returned point.
    pub residual: f64,
    pub converged: bool,
}

/// Upper bound on the largest eigenvalue of `XᵀX`: 30 power iterations, times 1.1.
pub fn lipschitz(x: &Array2<f64>) -> f64 {
    let d = x.ncols();
    if d == 0 {
        return 1.0;
    }
    let mut v = Array1::from_elem(d, 1.0 / (d as f64).sqrt());
    let mut est = 0.0;
    for _ in 0..30 {
        let u = x.t().dot(&x.dot(&v));
        let norm = u.dot(&u).sqrt();
        if norm == 0.0 {
            break;
        }
        est = norm;
        v = u / norm;
    }
    (1.1 * est).max(f64::MIN_POSITIVE)
}

struct Problem<'a> {
    task: &'a LeastSquaresTask,
    l: f64,
    smooth_only: bool,
}

impl Problem<'_> {
    fn smooth(&self, w: &Array1<f64>) -> f64 {
        let r = self.task.x.dot(w) - &self.task.y;
        0.5 * r.dot(&r)
    }

    fn grad(&self, w: &Array1<f64>) -> Array1<f64> {
        self.task.x.t().dot(&(self.task.x.dot(w) - &self.task.y))
    }

    fn objective(&self, w: &Array1<f64>) -> Result<f64> {
        let mut f = self.smooth(w);
        if !self.smooth_only && self.task.lambda > 0.0 {
            f += self.task.lambda * penalty_value_linf(w.as_slice().unwrap(), &self.task.penalty)?;
        }
        Ok(f)
    }

    /// `prox_{λΩ/L}(w - ∇l(w)/L)`.
    fn step(&self, w: &Array1<f64>) -> Result<Array1<f64>> {
        let v = w - &(self.grad(w) / self.l);
        if self.task.lambda == 0.0 {
            return Ok(v);
        }
        let pb = ProxProblem::new(v.to_vec(), self.task.lambda / self.l, self.task.p, self.task.penalty.clone())?;
        Ok(Array1::from(prox(&pb)?.w))
    }
}

/// FISTA with a restart whenever the objective increases: momentum is reset
/// and the step is redone from the previous iterate.
pub fn fista(task: &LeastSquaresTask) -> Result<FistaResult> {
    task.validate()?;
    let l = lipschitz(&task.x);
    let pb = Problem { task, l, smooth_only: task.p != Exponent::Infinity };
    let d = task.x.ncols();
    let mut w = Array1::zeros(d);
    let mut yk = w.clone();
    let mut t = 1.0f64;
    let mut obj = pb.objective(&w)?;
    let mut trace = vec![obj];
    let (mut restarts, mut iterations, mut converged) = (0, 0, false);
    while iterations < task.max_iters {
        iterations += 1;
        let mut next = pb.step(&yk)?;
        let mut next_obj = pb.objective(&next)?;
        if next_obj > obj {
            restarts += 1;
            t = 1.0;
            next = pb.step(&w)?;
            next_obj = pb.objective(&next)?;
            if next_obj > obj {
                // Rounding-level increase at a fixed point.
                next = w.clone();
                next_obj = obj;
            }
        }
        if !next_obj.is_finite() {
            return Err(Error::Numerical("objective became non-finite".into()));
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        yk = &next + &((&next - &w) * ((t - 1.0) / t_next));
        t = t_next;
        let change = (obj - next_obj).abs() / obj.abs().max(1e-300);
        w = next;
        obj = next_obj;
        trace.push(obj);
        if change < task.tolerance {
            converged = true;
            break;
        }
    }
    let residual = (&w - &pb.step(&w)?).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(FistaResult {
        w: w.to_vec(),
        objective: trace,
        smooth_only: pb.smooth_only,
        iterations,
        restarts,
        lipschitz: l,
        residual,
        converged,
    })
}
