//! Group-sparse regression by FISTA on a synthetic design.

use ndarray::{Array1, Array2};
use rand::Rng;

use proxflow::generate::{rng, uniform_z};
use proxflow::setfn::Group;
use proxflow::solver::{fista, LeastSquaresTask};
use proxflow::{Exponent, SetFunction};

fn main() -> proxflow::Result<()> {
    let (n, d) = (60, 12);
    let mut r = rng(3);
    let x = Array2::from_shape_fn((n, d), |_| r.gen_range(-1.0..1.0));
    // Only the first group is active.
    let truth = Array1::from_iter((0..d).map(|i| if i < 4 { 1.0 } else { 0.0 }));
    let y = x.dot(&truth) + Array1::from(uniform_z(&mut r, n, 0.05));
    let groups = (0..3).map(|g| Group::new(1.0, (4 * g..4 * g + 4).collect::<Vec<_>>())).collect();
    let task = LeastSquaresTask {
        x,
        y,
        lambda: 2.0,
        p: Exponent::Infinity,
        penalty: SetFunction::group_cover(d, groups)?,
        max_iters: 2000,
        tolerance: 1e-12,
    };
    let res = fista(&task)?;
    println!("iterations {}, restarts {}, residual {:.2e}", res.iterations, res.restarts, res.residual);
    println!("objective {:.6} -> {:.6}", res.objective[0], res.objective.last().unwrap());
    let w: Vec<String> = res.w.iter().map(|v| format!("{v:.3}")).collect();
    println!("w = [{}]", w.join(", "));
    Ok(())
}
