//! Builds cut networks for several penalties and confirms, by enumeration, that
//! the minimum cut with a set pinned to the source side reproduces F.

use proxflow::netrep::{represent, represent_order3};
use proxflow::oracle::verify_representation;
use proxflow::setfn::{CubicTerms, Edge, Group, Hyperedge};
use proxflow::SetFunction;

fn main() -> proxflow::Result<()> {
    let cases = [
        ("group cover", SetFunction::group_cover(4, vec![Group::new(1.0, vec![0, 1]), Group::new(2.0, vec![1, 2, 3])])?),
        ("graph cut", SetFunction::graph_cut(4, vec![Edge::new(0, 1, 1.0), Edge::new(2, 3, 0.5)])?),
        ("hypergraph", SetFunction::hypergraph_cut(4, vec![Hyperedge::new(1.0, vec![0, 2, 3])])?),
        ("truncation", SetFunction::truncation(vec![1.0, 2.0, 0.5, 1.0], 2.5)?),
    ];
    for (name, f) in &cases {
        let net = represent(f)?;
        println!("{name:<12} {} aux nodes, {} arcs, exact: {}", net.aux_count(), net.arcs().len(), verify_representation(&net, f)?);
    }

    let terms = CubicTerms::new().linear(0, 1.0).linear(1, -0.5).pair(0, 1, -1.5).pair(1, 2, -1.0).triple(0, 1, 2, 0.8).pair(0, 2, -1.0);
    let f = SetFunction::cubic(3, terms)?;
    println!("cubic submodular: {}", f.is_submodular()?);
    let net = represent_order3(&f.mobius()?)?;
    println!("{:<12} {} aux nodes, {} arcs, exact: {}", "order 3", net.aux_count(), net.arcs().len(), verify_representation(&net, &f)?);
    Ok(())
}
