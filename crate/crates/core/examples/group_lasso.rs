//! Overlapping group lasso: prox of `λ Σ_G w_G ‖x_G‖_p` for p = 2 and p = ∞.
//!
//! Run with `cargo run --example group_lasso`.

use proxflow::setfn::Group;
use proxflow::{prox, Exponent, ProxProblem, SetFunction};

fn main() -> proxflow::Result<()> {
    let groups = vec![
        Group::new(1.0, vec![0, 1, 2]),
        Group::new(1.0, vec![2, 3, 4]),
        Group::new(0.5, vec![5]),
    ];
    let f = SetFunction::group_cover(6, groups)?;
    let z = vec![3.0, -1.0, 0.5, 0.2, -0.1, 2.0];
    for p in [Exponent::Finite(2.0), Exponent::Infinity] {
        let sol = prox(&ProxProblem::new(z.clone(), 1.0, p, f.clone())?)?;
        println!("p = {p:?}");
        println!("  w      = {:?}", round(&sol.w));
        println!("  regime = {:?}, {} breakpoints", sol.report.regime, sol.report.breakpoints.len());
    }
    Ok(())
}

fn round(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e6).round() / 1e6).collect()
}
