//! The nested chain of parametric minimum cuts behind a prox call, and the
//! check that each set of the chain is tight for the recovered dual vector.

use proxflow::maxflow::FlowOptions;
use proxflow::netrep::represent;
use proxflow::paraflow::{self, ParametricProblem};
use proxflow::prox::DualSetup;
use proxflow::setfn::Group;
use proxflow::{Exponent, ProxProblem, SetFunction};

fn main() -> proxflow::Result<()> {
    let f = SetFunction::group_cover(
        5,
        vec![Group::new(1.0, vec![0, 1]), Group::new(1.0, vec![1, 2, 3]), Group::new(2.0, vec![3, 4])],
    )?;
    let pb = ProxProblem::new(vec![2.0, 1.5, -0.3, 0.7, -2.5], 1.0, Exponent::Infinity, f)?;
    let setup = DualSetup::new(&pb)?;
    let para = ParametricProblem::new(represent(&setup.shifted)?, setup.curves.clone())?;
    println!("alpha bounds: {:?}", para.alpha_bounds());

    let sol = paraflow::solve(&para, &FlowOptions::default())?;
    let tau = paraflow::recover_tau(&sol.chain, &setup.shifted, &setup.curves)?;
    for (j, set) in sol.chain.sets.iter().enumerate() {
        let at = if j == 0 { "-inf".to_string() } else { format!("{:.4}", sol.chain.breakpoints[j - 1]) };
        let t: f64 = set.iter().map(|&i| tau[i]).sum();
        println!("α = {at:>8}  A = {set:?}  τ(A) = {t:.4}  F(A) = {:.4}", setup.shifted.eval(set)?);
    }
    let (w, _) = setup.primal(&pb, &tau);
    println!("w = {w:?}");
    Ok(())
}
