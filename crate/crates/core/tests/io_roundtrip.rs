use proptest::prelude::*;

use proxflow::io::*;
use proxflow::netrep::{represent, Capacity, FlowNetwork};
use proxflow::setfn::{CubicTerms, Edge, Group, Hyperedge, SetFunction};

fn weight() -> impl Strategy<Value = f64> {
    prop_oneof![(0u8..=20).prop_map(f64::from), 0.0..=10.0f64]
}

proptest! {
    #[test]
    fn groups(gs in prop::collection::vec((weight(), prop::collection::vec(0usize..50, 1..8)), 0..10)) {
        let groups: Vec<Group> = gs.into_iter().map(|(w, m)| Group::new(w, m)).collect();
        prop_assert_eq!(parse_groups(&emit_groups(&groups)).unwrap(), groups);
    }

    #[test]
    fn edges(es in prop::collection::vec((0usize..50, 0usize..50, weight()), 0..20)) {
        let edges: Vec<Edge> = es.into_iter().map(|(i, j, w)| Edge::new(i, j, w)).collect();
        prop_assert_eq!(parse_edges(&emit_edges(&edges)).unwrap(), edges);
    }

    #[test]
    fn hyperedges(hs in prop::collection::vec((weight(), prop::collection::vec(0usize..50, 1..8)), 0..10)) {
        let hs: Vec<Hyperedge> = hs.into_iter().map(|(w, m)| Hyperedge::new(w, m)).collect();
        prop_assert_eq!(parse_hyperedges(&emit_hyperedges(&hs)).unwrap(), hs);
    }

    #[test]
    fn vectors(v in prop::collection::vec(-1e6..1e6f64, 0..50)) {
        prop_assert_eq!(parse_vector(&emit_vector(&v)).unwrap(), v);
    }

    #[test]
    fn truncation(w in prop::collection::vec(weight(), 1..10), cap in weight()) {
        prop_assert_eq!(parse_truncation(&emit_truncation(&w, cap)).unwrap(), (w, cap));
    }

    #[test]
    fn cubic(lin in prop::collection::vec(-2.0..2.0f64, 4), pair in -2.0..0.0f64, triple in -1.0..1.0f64) {
        let mut t = CubicTerms::new().pair(0, 1, pair).triple(1, 2, 3, triple);
        for (i, c) in lin.into_iter().enumerate() {
            t = t.linear(i, c);
        }
        prop_assert_eq!(parse_cubic(&emit_cubic(&t)).unwrap(), t);
    }

    #[test]
    fn dimacs_of_random_network(
        d in 0usize..5,
        aux in 0usize..4,
        arcs in prop::collection::vec((0usize..11, 0usize..11, prop_oneof![weight().prop_map(Capacity::Finite), Just(Capacity::Infinite)]), 0..20),
        offset in -5.0..5.0f64,
    ) {
        let mut net = FlowNetwork::new(d);
        for _ in 0..aux {
            net.add_aux();
        }
        let n = net.node_count();
        for (u, v, c) in arcs {
            let (u, v) = (u % n, v % n);
            if u != v && v != FlowNetwork::SOURCE && u != FlowNetwork::SINK {
                net.add_arc(u, v, c).unwrap();
            }
        }
        for i in 0..d {
            net.add_arc(FlowNetwork::SOURCE, net.data(i), Capacity::Param(i)).unwrap();
        }
        net.set_offset(offset);
        prop_assert_eq!(parse_dimacs(&emit_dimacs(&net)).unwrap(), net);
    }

    #[test]
    fn matrices(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let m = ndarray::Array2::from_shape_fn((rows, cols), |(i, j)| ((seed >> ((i * cols + j) % 60)) & 0xff) as f64 / 7.0 - 3.0);
        prop_assert_eq!(parse_matrix(&emit_matrix(&m)).unwrap(), m);
    }
}

#[test]
fn penalty_networks_survive_dimacs() {
    let f = SetFunction::group_cover(4, vec![Group::new(1.0, vec![0, 1]), Group::new(0.5, vec![1, 2, 3])]).unwrap();
    let net = represent(&f).unwrap();
    assert_eq!(parse_dimacs(&emit_dimacs(&net)).unwrap(), net);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse_groups("1.0 0 1\n# note\nx 2\n").unwrap_err();
    assert!(err.to_string().contains('3'), "{err}");
}
