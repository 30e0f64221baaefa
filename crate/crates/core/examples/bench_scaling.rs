//! Runtime scaling of the prox on the fused family, printed as CSV.

use proxflow::bench::{run_bench, write_csv, BenchConfig, BenchFamily};

fn main() -> proxflow::Result<()> {
    let cfg = BenchConfig { family: BenchFamily::Fused, dims: vec![10, 100, 1000, 4000], instances: 5, ..Default::default() };
    let rows = run_bench(&cfg)?;
    write_csv(&rows, std::io::stdout())
}
