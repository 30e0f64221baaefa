//! Command-line front end used by the `proxflow` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ndarray::Array1;
use serde_json::json;

use crate::bench::{run_bench, write_csv, BenchConfig, BenchFamily};
use crate::error::{Error, Result};
use crate::generate::{rng, uniform_z};
use crate::io;
use crate::maxflow::{max_flow, CutSide, FlowOptions};
use crate::netrep::{represent, Capacity};
use crate::oracle::{decomposition_prox, verify_representation, OracleBudget};
use crate::paraflow::{self, Curve, NodeCurve, ParametricProblem};
use crate::prox::{prox, Exponent, ProxProblem, SeparablePiece};
use crate::setfn::SetFunction;
use crate::solver::{fista, LeastSquaresTask};

#[derive(Debug, Parser)]
#[command(name = "proxflow", version, about = "Proximal operators of submodular penalties by parametric max-flow")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for instance-level parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Stopping tolerance of `solve` and comparison tolerance of `verify`.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Proximal operator of λ Ω_{F,p} at z.
    Prox(ProxArgs),
    /// Regularized least squares by FISTA.
    Solve(SolveArgs),
    /// Maximum flow and both minimum cuts of a DIMACS network.
    Mincut(MincutArgs),
    /// Chain of parametric minimum cuts of a DIMACS network.
    Paraflow(ParaflowArgs),
    /// Representation and oracle checks on a penalty.
    Verify(VerifyArgs),
    /// Runtime scaling on random instances.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct PenaltyArgs {
    /// group | cut | hypergraph | cubic | truncation
    #[arg(long)]
    pub penalty: io::PenaltyFormat,
    /// Penalty description file.
    #[arg(long)]
    pub spec: PathBuf,
    /// 2 or inf (any p > 1 is accepted).
    #[arg(long, default_value = "inf")]
    pub p: Exponent,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}

#[derive(Debug, Args)]
pub struct ProxArgs {
    #[command(flatten)]
    pub penalty: PenaltyArgs,
    /// Vector z.
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write w (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// JSON report with τ and solver diagnostics.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub penalty: PenaltyArgs,
    /// Design matrix X as CSV.
    #[arg(long)]
    pub design: PathBuf,
    /// Target y as CSV.
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    /// Where to write w (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Objective trace as CSV `iteration,objective`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// JSON with w, the trace and diagnostics.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MincutArgs {
    /// Extended DIMACS network.
    #[arg(long)]
    pub network: PathBuf,
    /// Values of the parametric arcs, indexed by data node.
    #[arg(long)]
    pub param: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RegimeArg {
    Norm,
    Lovasz,
}

#[derive(Debug, Args)]
pub struct ParaflowArgs {
    /// Extended DIMACS network representing F; parametric arcs are ignored.
    #[arg(long)]
    pub network: PathBuf,
    /// Vector z.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value = "inf")]
    pub p: Exponent,
    #[arg(long, value_enum, default_value_t = RegimeArg::Norm)]
    pub regime: RegimeArg,
    /// JSON output (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub penalty: PenaltyArgs,
    /// Fixed z; random seeded vectors are used when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Ground-set size when no z is given.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Random vectors to test.
    #[arg(long, default_value_t = 5)]
    pub instances: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// group | fused | gfl
    #[arg(long, default_value = "group")]
    pub family: BenchFamily,
    /// Comma-separated increasing dimensions.
    #[arg(long, value_delimiter = ',', default_values_t = vec![100usize, 200, 400])]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    #[arg(long, default_value = "inf")]
    pub p: Exponent,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// CSV output (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write_to(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn load_penalty(args: &PenaltyArgs, d: usize) -> Result<SetFunction> {
    io::parse_penalty(args.penalty, &read(&args.spec)?, d)
}

fn to_json(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn cmd_prox(a: &ProxArgs, out: &mut dyn Write) -> Result<()> {
    let z = io::parse_vector(&read(&a.input)?)?;
    let f = load_penalty(&a.penalty, z.len())?;
    let sol = prox(&ProxProblem::new(z, a.penalty.lambda, a.penalty.p, f)?)?;
    if let Some(path) = &a.report {
        let report = json!({ "w": sol.w, "tau": sol.tau, "report": sol.report });
        write_to(Some(path), &to_json(&report), out)?;
    }
    write_to(a.output.as_deref(), &io::emit_vector(&sol.w), out)
}

fn cmd_solve(a: &SolveArgs, tolerance: f64, out: &mut dyn Write) -> Result<()> {
    let x = io::parse_matrix(&read(&a.design)?)?;
    let y = io::parse_csv_vector(&read(&a.target)?)?;
    let penalty = load_penalty(&a.penalty, x.ncols())?;
    let task = LeastSquaresTask {
        x,
        y: Array1::from(y),
        lambda: a.penalty.lambda,
        p: a.penalty.p,
        penalty,
        max_iters: a.max_iters,
        tolerance,
    };
    let r = fista(&task)?;
    if let Some(path) = &a.trace {
        let mut s = String::from("iteration,objective\n");
        for (k, v) in r.objective.iter().enumerate() {
            s += &format!("{k},{v}\n");
        }
        write_to(Some(path), &s, out)?;
    }
    if let Some(path) = &a.report {
        write_to(Some(path), &to_json(&serde_json::to_value(&r).expect("serializable")), out)?;
    }
    write_to(a.output.as_deref(), &io::emit_vector(&r.w), out)
}

fn cmd_mincut(a: &MincutArgs, out: &mut dyn Write) -> Result<()> {
    let net = io::parse_dimacs(&read(&a.network)?)?;
    let param = match &a.param {
        Some(p) => io::parse_vector(&read(p)?)?,
        None => {
            if net.arcs().iter().any(|arc| matches!(arc.cap, Capacity::Param(_))) {
                return Err(Error::Input("network has parametric arcs; pass --param".into()));
            }
            vec![0.0; net.dim()]
        }
    };
    if param.len() != net.dim() {
        return Err(Error::Input(format!("{} parameter values for {} data nodes", param.len(), net.dim())));
    }
    let state = max_flow(&net, &|i| param[i], &FlowOptions::default())?;
    let (lo, hi) = (state.min_cut(CutSide::Minimal)?, state.min_cut(CutSide::Maximal)?);
    let report = json!({
        "value": state.value(),
        "minimal_source_side": lo.source_side,
        "maximal_source_side": hi.source_side,
        "counters": state.counters(),
    });
    write_to(None, &to_json(&report), out)
}

fn cmd_paraflow(a: &ParaflowArgs, out: &mut dyn Write) -> Result<()> {
    let net = io::parse_dimacs(&read(&a.network)?)?;
    let z = io::parse_vector(&read(&a.input)?)?;
    if z.len() != net.dim() {
        return Err(Error::Input(format!("z has length {}, network has {} data nodes", z.len(), net.dim())));
    }
    let r = a.p.conjugate();
    a.p.validate()?;
    let curves = z
        .iter()
        .map(|&z| {
            let curve = match a.regime {
                RegimeArg::Norm => Curve::Norm(SeparablePiece::new(z, a.lambda, r)?),
                RegimeArg::Lovasz => {
                    SeparablePiece::new(z, a.lambda, 1.0)?;
                    Curve::Signed { z, lambda: a.lambda }
                }
            };
            Ok(NodeCurve { curve, shift: 0.0 })
        })
        .collect::<Result<Vec<_>>>()?;
    let pb = ParametricProblem::new(net, curves)?;
    let sol = paraflow::solve(&pb, &FlowOptions::default())?;
    let report = json!({
        "breakpoints": sol.chain.breakpoints,
        "sets": sol.chain.sets,
        "values": sol.chain.values,
        "tau": sol.tau,
        "alpha_bounds": pb.alpha_bounds(),
        "counters": sol.counters,
        "flow_solves": sol.flow_solves,
    });
    write_to(a.output.as_deref(), &to_json(&report), out)
}

fn cmd_verify(a: &VerifyArgs, seed: u64, tolerance: f64, out: &mut dyn Write) -> Result<bool> {
    let fixed = a.input.as_ref().map(|p| read(p).and_then(|t| io::parse_vector(&t))).transpose()?;
    let d = match (&fixed, a.dim) {
        (Some(z), _) => z.len(),
        (None, Some(d)) => d,
        (None, None) => return Err(Error::Input("pass --input or --dim".into())),
    };
    let f = load_penalty(&a.penalty, d)?;
    let budget = OracleBudget::default();
    let mut ok = true;
    let mut line = |name: &str, pass: bool, detail: String, out: &mut dyn Write| -> Result<()> {
        ok &= pass;
        writeln!(out, "{} {name}: {detail}", if pass { "PASS" } else { "FAIL" })?;
        Ok(())
    };
    match represent(&f) {
        Ok(net) => match verify_representation(&net, &f) {
            Ok(pass) => line("representation", pass, format!("{} auxiliary nodes", net.aux_count()), out)?,
            Err(Error::Budget(m)) => writeln!(out, "SKIP representation: {m}")?,
            Err(e) => return Err(e),
        },
        Err(e) => line("representation", false, e.to_string(), out)?,
    }
    let mut r = rng(seed);
    let vectors: Vec<Vec<f64>> = match fixed {
        Some(z) => vec![z],
        None => (0..a.instances).map(|_| uniform_z(&mut r, d, 1.0)).collect(),
    };
    for (k, z) in vectors.into_iter().enumerate() {
        let pb = ProxProblem::new(z, a.penalty.lambda, a.penalty.p, f.clone())?;
        let mine = prox(&pb)?;
        match decomposition_prox(&pb, &budget) {
            Ok(o) => {
                let err = mine.w.iter().zip(&o.w).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                line(&format!("oracle #{k}"), err <= tolerance.max(1e-12), format!("max |Δw| = {err:.3e}"), out)?;
            }
            Err(Error::Budget(m)) => writeln!(out, "SKIP oracle #{k}: {m}")?,
            Err(e) => return Err(e),
        }
    }
    Ok(ok)
}

fn cmd_bench(a: &BenchArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let cfg = BenchConfig {
        family: a.family,
        dims: a.dims.clone(),
        instances: a.instances,
        p: a.p,
        lambda: a.lambda,
        seed,
    };
    let rows = run_bench(&cfg)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    write_to(a.output.as_deref(), &String::from_utf8_lossy(&buf), out)
}

/// Runs one parsed command line, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Input("--threads must be positive".into()));
        }
        // The global pool can be configured once per process; later calls keep it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Prox(a) => cmd_prox(a, out),
        Command::Solve(a) => cmd_solve(a, cli.tolerance, out),
        Command::Mincut(a) => cmd_mincut(a, out),
        Command::Paraflow(a) => cmd_paraflow(a, out),
        Command::Verify(a) => {
            if cmd_verify(a, cli.seed, cli.tolerance, out)? {
                Ok(())
            } else {
                Err(Error::Numerical("verification failed".into()))
            }
        }
        Command::Bench(a) => cmd_bench(a, cli.seed, out),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
