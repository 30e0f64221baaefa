//! Maximum flow on a network read from DIMACS text, with both extreme minimum cuts.

use proxflow::io::parse_dimacs;
use proxflow::maxflow::{max_flow, CutSide, FlowOptions};

const NETWORK: &str = "\
p max 6 8
n 1 s
n 2 t
a 1 3 4
a 1 4 2
a 3 4 1
a 3 5 2
a 4 6 3
a 5 2 2
a 6 2 3
a 5 6 1
";

fn main() -> proxflow::Result<()> {
    let net = parse_dimacs(NETWORK)?;
    let flow = max_flow(&net, &|_| 0.0, &FlowOptions::default())?;
    println!("max flow = {}", flow.value());
    for side in [CutSide::Minimal, CutSide::Maximal] {
        let cut = flow.min_cut(side)?;
        println!("{side:?} source side {:?}, capacity {}", cut.source_side, cut.capacity);
    }
    for (u, v, x) in flow.arc_flows().into_iter().filter(|a| a.2 > 0.0) {
        println!("  {u} -> {v}: {x}");
    }
    Ok(())
}
