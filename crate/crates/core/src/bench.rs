//! Runtime scaling of [`prox`] on seeded random instances.
//!
//! `z` is uniform in `[-1, 1]^d`. Group instances use `d/20` to `d/10` groups
//! of 30 to 100 elements; fused instances use a unit-weight chain; general
//! fused-lasso (GFL) instances use a sparse connected graph with weights in
//! `(0, 1]`.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{bench_groups, rng, sparse_graph, uniform_z};
use crate::oracle::{decomposition_prox, OracleBudget};
use crate::prox::{prox, Exponent, ProxProblem};
use crate::setfn::SetFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BenchFamily {
    Group,
    Fused,
    Gfl,
}

impl FromStr for BenchFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group" => Ok(BenchFamily::Group),
            "fused" => Ok(BenchFamily::Fused),
            "gfl" => Ok(BenchFamily::Gfl),
            other => Err(Error::Input(format!("unknown bench family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub family: BenchFamily,
    pub dims: Vec<usize>,
    pub instances: usize,
    pub p: Exponent,
    pub lambda: f64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            family: BenchFamily::Group,
            dims: vec![100, 200, 400],
            instances: 10,
            p: Exponent::Infinity,
            lambda: 1.0,
            seed: 0,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.iter().any(|&d| d == 0) || self.dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("dimension schedule must be positive and increasing".into()));
        }
        if self.instances == 0 {
            return Err(Error::Input("at least one instance per point is needed".into()));
        }
        self.p.validate()
    }
}

/// Largest dimension at which the exhaustive oracle is timed as well.
pub const ORACLE_MAX_D: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub d: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub pushes: f64,
    pub relabels: f64,
    pub oracle_ms: Option<f64>,
}

/// The instance a benchmark run would solve for `(family, d, seed)`.
pub fn bench_instance(family: BenchFamily, d: usize, lambda: f64, p: Exponent, seed: u64) -> Result<ProxProblem> {
    let mut r = rng(seed);
    let z = uniform_z(&mut r, d, 1.0);
    let penalty = match family {
        BenchFamily::Group => SetFunction::group_cover(d, bench_groups(&mut r, d))?,
        BenchFamily::Fused => SetFunction::chain(d, &vec![1.0; d.saturating_sub(1)])?,
        BenchFamily::Gfl => SetFunction::graph_cut(d, sparse_graph(&mut r, d, 1.0))?,
    };
    ProxProblem::new(z, lambda, p, penalty)
}

struct Sample {
    ms: f64,
    pushes: u64,
    relabels: u64,
    oracle_ms: Option<f64>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Times every instance on the current rayon pool and averages per dimension.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.dims.len());
    for (k, &d) in config.dims.iter().enumerate() {
        let samples = (0..config.instances)
            .into_par_iter()
            .map(|j| {
                let seed = config.seed.wrapping_add((k * config.instances + j) as u64);
                let pb = bench_instance(config.family, d, config.lambda, config.p, seed)?;
                let start = Instant::now();
                let sol = prox(&pb)?;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                let oracle_ms = if d <= ORACLE_MAX_D {
                    let start = Instant::now();
                    decomposition_prox(&pb, &OracleBudget::default())?;
                    Some(start.elapsed().as_secs_f64() * 1e3)
                } else {
                    None
                };
                Ok(Sample { ms, pushes: sol.report.counters.pushes, relabels: sol.report.counters.relabels, oracle_ms })
            })
            .collect::<Result<Vec<_>>>()?;
        let (mean_ms, std_ms) = mean_std(&samples.iter().map(|s| s.ms).collect::<Vec<_>>());
        let n = samples.len() as f64;
        let oracle: Option<Vec<f64>> = samples.iter().map(|s| s.oracle_ms).collect();
        rows.push(BenchRow {
            d,
            mean_ms,
            std_ms,
            pushes: samples.iter().map(|s| s.pushes as f64).sum::<f64>() / n,
            relabels: samples.iter().map(|s| s.relabels as f64).sum::<f64>() / n,
            oracle_ms: oracle.map(|o| mean_std(&o).0),
        });
    }
    Ok(rows)
}

/// CSV with header `d,mean_ms,std_ms,pushes,relabels,oracle_ms`.
pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["d", "mean_ms", "std_ms", "pushes", "relabels", "oracle_ms"])
        .map_err(|e| Error::Input(e.to_string()))?;
    for r in rows {
        w.write_record([
            r.d.to_string(),
            format!("{:.6}", r.mean_ms),
            format!("{:.6}", r.std_ms),
            format!("{:.1}", r.pushes),
            format!("{:.1}", r.relabels),
            r.oracle_ms.map(|o| format!("{o:.6}")).unwrap_or_default(),
        ])
        .map_err(|e| Error::Input(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_schedule_gives_header_only() {
        let cfg = BenchConfig { dims: vec![], ..Default::default() };
        let rows = run_bench(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "d,mean_ms,std_ms,pushes,relabels,oracle_ms\n");
    }

    #[test]
    fn instances_are_deterministic() {
        let a = bench_instance(BenchFamily::Gfl, 50, 1.0, Exponent::Infinity, 9).unwrap();
        let b = bench_instance(BenchFamily::Gfl, 50, 1.0, Exponent::Infinity, 9).unwrap();
        assert_eq!(a, b);
        let (ca, cb) = (prox(&a).unwrap(), prox(&b).unwrap());
        assert_eq!(ca.report.breakpoints, cb.report.breakpoints);
    }

    #[test]
    fn rejects_unsorted_schedule() {
        let cfg = BenchConfig { dims: vec![200, 100], ..Default::default() };
        assert!(run_bench(&cfg).is_err());
    }
}
