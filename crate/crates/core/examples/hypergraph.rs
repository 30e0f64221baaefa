//! Hypergraph cut penalty: each hyperedge pulls its members towards a common value.

use proxflow::setfn::Hyperedge;
use proxflow::{prox, Exponent, ProxProblem, SetFunction};

fn main() -> proxflow::Result<()> {
    let f = SetFunction::hypergraph_cut(
        5,
        vec![Hyperedge::new(1.0, vec![0, 1, 2]), Hyperedge::new(0.5, vec![2, 3, 4])],
    )?;
    let z = vec![2.0, 1.0, 0.0, -1.0, 0.5];
    for lambda in [0.1, 0.5, 2.0] {
        let sol = prox(&ProxProblem::new(z.clone(), lambda, Exponent::Infinity, f.clone())?)?;
        let w: Vec<String> = sol.w.iter().map(|v| format!("{v:+.4}")).collect();
        println!("λ = {lambda:<4} w = [{}]", w.join(", "));
    }
    Ok(())
}
