use proptest::prelude::*;

use proxflow::maxflow::FlowOptions;
use proxflow::netrep::represent;
use proxflow::oracle::{brute_sfm, OracleBudget};
use proxflow::paraflow::{self, ParametricProblem};
use proxflow::prox::DualSetup;
use proxflow::setfn::{Edge, Group};
use proxflow::{Exponent, ProxProblem, SetFunction};

fn instance() -> impl Strategy<Value = ProxProblem> {
    (1usize..=9).prop_flat_map(|d| {
        let groups = prop::collection::vec((0.1..=2.0f64, prop::collection::btree_set(0..d, 1..=d)), 1..=4)
            .prop_map(move |gs| SetFunction::group_cover(d, gs.into_iter().map(|(w, m)| Group::new(w, m.into_iter().collect::<Vec<_>>())).collect()).unwrap());
        let cut = prop::collection::vec((0..d, 0..d, 0.1..=2.0f64), 0..=2 * d).prop_map(move |es| {
            SetFunction::graph_cut(d, es.into_iter().filter(|e| e.0 != e.1).map(|(i, j, w)| Edge::new(i, j, w)).collect()).unwrap()
        });
        let p = prop_oneof![Just(Exponent::Infinity), Just(Exponent::Finite(2.0))];
        (prop_oneof![groups, cut], prop::collection::vec(-3.0..=3.0f64, d), 0.1..=3.0f64, p)
            .prop_map(|(f, z, l, p)| ProxProblem::new(z, l, p, f).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn chain_is_nested_tight_and_optimal(pb in instance()) {
        let setup = DualSetup::new(&pb).unwrap();
        let para = ParametricProblem::new(represent(&setup.shifted).unwrap(), setup.curves.clone()).unwrap();
        let sol = paraflow::solve(&para, &FlowOptions::default()).unwrap();
        let chain = &sol.chain;
        let d = pb.z.len();
        prop_assert_eq!(chain.sets.len(), chain.breakpoints.len() + 1);
        prop_assert_eq!(chain.sets.last().map(|s| s.len()), Some(d));
        for w in chain.sets.windows(2) {
            prop_assert!(w[0].len() < w[1].len() && w[0].iter().all(|i| w[1].contains(i)));
        }
        prop_assert!(chain.breakpoints.windows(2).all(|b| b[0] < b[1]));

        let mask = |s: &[usize]| s.iter().fold(0u64, |m, &i| m | 1 << i);
        for (j, &alpha) in chain.breakpoints.iter().enumerate() {
            let phi: Vec<f64> = setup.curves.iter().map(|c| c.value(alpha)).collect();
            let g = |m: u64| setup.shifted.eval_bits(m) - (0..d).filter(|&i| m >> i & 1 == 1).map(|i| phi[i]).sum::<f64>();
            let best = brute_sfm(d, &g, &OracleBudget::default()).unwrap();
            for set in [&chain.sets[j], &chain.sets[j + 1]] {
                prop_assert!(g(mask(set)) <= best.value + 1e-8 * best.value.abs().max(1.0));
            }
        }

        let tau = paraflow::recover_tau(chain, &setup.shifted, &setup.curves).unwrap();
        for set in &chain.sets {
            let t: f64 = set.iter().map(|&i| tau[i]).sum();
            prop_assert!((t - setup.shifted.eval(set).unwrap()).abs() <= 1e-8);
        }
        // τ is in the base polytope: every subset is dominated.
        for bits in 0..1u64 << d {
            let t: f64 = (0..d).filter(|&i| bits >> i & 1 == 1).map(|i| tau[i]).sum();
            prop_assert!(t <= setup.shifted.eval_bits(bits) + 1e-8);
        }
    }

    #[test]
    fn alpha_bounds_are_ordered(pb in instance()) {
        let setup = DualSetup::new(&pb).unwrap();
        let para = ParametricProblem::new(represent(&setup.shifted).unwrap(), setup.curves.clone()).unwrap();
        let (lo, hi) = para.alpha_bounds();
        prop_assert!(lo <= hi);
    }
}
