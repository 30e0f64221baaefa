use proptest::prelude::*;

use proxflow::oracle::{decomposition_prox, OracleBudget};
use proxflow::prox::Regime;
use proxflow::setfn::{Edge, Group, Hyperedge};
use proxflow::{prox, Exponent, ProxProblem, SetFunction};

fn penalty(d: usize) -> impl Strategy<Value = SetFunction> {
    let groups = prop::collection::vec((0.1..=2.0f64, prop::collection::btree_set(0..d, 1..=d)), 1..=4)
        .prop_map(move |gs| SetFunction::group_cover(d, gs.into_iter().map(|(w, m)| Group::new(w, m.into_iter().collect::<Vec<_>>())).collect()).unwrap());
    let cut = prop::collection::vec((0..d, 0..d, 0.1..=2.0f64), 0..=2 * d).prop_map(move |es| {
        SetFunction::graph_cut(d, es.into_iter().filter(|e| e.0 != e.1).map(|(i, j, w)| Edge::new(i, j, w)).collect()).unwrap()
    });
    let hyper = prop::collection::vec((0.1..=2.0f64, prop::collection::btree_set(0..d, 1..=d)), 1..=3)
        .prop_map(move |hs| SetFunction::hypergraph_cut(d, hs.into_iter().map(|(w, m)| Hyperedge::new(w, m.into_iter().collect::<Vec<_>>())).collect()).unwrap());
    prop_oneof![groups, cut, hyper]
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![Just(Exponent::Infinity), Just(Exponent::Finite(2.0)), (1.2..=6.0f64).prop_map(Exponent::Finite)]
}

fn instance(max_d: usize) -> impl Strategy<Value = (SetFunction, Vec<f64>, Vec<f64>, f64, Exponent)> {
    (1..=max_d).prop_flat_map(|d| {
        (penalty(d), prop::collection::vec(-3.0..=3.0f64, d), prop::collection::vec(-3.0..=3.0f64, d), 0.05..=5.0f64, exponent())
    })
}

fn solve(f: &SetFunction, z: &[f64], lambda: f64, p: Exponent) -> proxflow::ProxSolution {
    prox(&ProxProblem::new(z.to_vec(), lambda, p, f.clone()).unwrap()).unwrap()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn agrees_with_decomposition_oracle((f, z, _, lambda, p) in instance(9)) {
        let pb = ProxProblem::new(z, lambda, p, f).unwrap();
        let mine = prox(&pb).unwrap();
        let oracle = decomposition_prox(&pb, &OracleBudget::default()).unwrap();
        for (a, b) in mine.w.iter().zip(&oracle.w) {
            prop_assert!((a - b).abs() <= 1e-6, "{:?} vs {:?}", mine.w, oracle.w);
        }
    }

    #[test]
    fn nonexpansive((f, z1, z2, lambda, p) in instance(30)) {
        let (w1, w2) = (solve(&f, &z1, lambda, p).w, solve(&f, &z2, lambda, p).w);
        prop_assert!(dist(&w1, &w2) <= dist(&z1, &z2) + 1e-8);
    }

    #[test]
    fn homogeneous_in_z_and_lambda((f, z, _, lambda, p) in instance(30), c in 0.1..=10.0f64) {
        let w = solve(&f, &z, lambda, p).w;
        let zc: Vec<f64> = z.iter().map(|v| c * v).collect();
        let wc = solve(&f, &zc, c * lambda, p).w;
        for (a, b) in w.iter().zip(&wc) {
            prop_assert!((c * a - b).abs() <= 1e-8 * c.max(1.0));
        }
    }

    #[test]
    fn norm_regime_shrinks_towards_zero((f, z, _, lambda, p) in instance(30)) {
        let sol = solve(&f, &z, lambda, p);
        if sol.report.regime == Regime::Norm {
            for (w, z) in sol.w.iter().zip(&z) {
                prop_assert!(w.abs() <= z.abs() + 1e-8 && w * z >= -1e-8);
            }
        }
    }

    #[test]
    fn singletons_soft_threshold(z in prop::collection::vec(-5.0..=5.0f64, 1..200), lambda in 0.01..=3.0f64) {
        let f = SetFunction::singletons(z.len(), 1.0).unwrap();
        let w = solve(&f, &z, lambda, Exponent::Infinity).w;
        for (w, z) in w.iter().zip(&z) {
            prop_assert!((w - z.signum() * (z.abs() - lambda).max(0.0)).abs() <= 1e-10);
        }
    }

    #[test]
    fn large_lambda_on_cover_gives_zero((f, z, _, _, p) in instance(12)) {
        if let proxflow::setfn::Kind::GroupCover(groups) = f.kind() {
            let w = solve(&f, &z, 1e6, p).w;
            for g in groups {
                prop_assert!(g.members.iter().all(|&i| w[i].abs() <= 1e-9));
            }
        }
    }
}
