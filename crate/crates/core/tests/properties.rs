use std::sync::Arc;

use proptest::prelude::*;

use wellbalanced::connectivity::LambdaTable;
use wellbalanced::io::Document;
use wellbalanced::oracles::{brute_eulerian_extension, brute_wbo_exists};
use wellbalanced::{
    check_ff_condition, eulerian_orientation, extend_to_eulerian, is_well_balanced, lambda_directed,
    lambda_undirected, r_value, ExtensionOutcome, GraphBuilder, Limits, MultiGraph, Orientation, VertexId, VertexSet,
};

fn graph_strategy(max_n: usize, max_pairs: usize, max_mult: u64) -> impl Strategy<Value = MultiGraph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1..=max_mult), 0..=max_pairs).prop_map(move |edges| {
            let mut b = GraphBuilder::new();
            for i in 0..n {
                b.add_vertex(format!("v{i}")).unwrap();
            }
            for (a, c, m) in edges {
                if a != c {
                    b.add_edge(VertexId(a), VertexId(c), m).unwrap();
                }
            }
            b.build()
        })
    })
}

fn with_mask(max_n: usize) -> impl Strategy<Value = (MultiGraph, u64)> {
    graph_strategy(max_n, 10, 3).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), 0..1u64 << n)
    })
}

fn with_orientation(max_n: usize) -> impl Strategy<Value = (MultiGraph, Vec<u64>, u64)> {
    with_mask(max_n).prop_flat_map(|(g, mask)| {
        let fwd: Vec<BoxedStrategy<u64>> = g.pairs().iter().map(|p| (0..=p.mult).boxed()).collect();
        (Just(g), fwd, Just(mask))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cut_is_symmetric_and_submodular((g, mask) in with_mask(7), other in any::<u64>()) {
        let n = g.vertex_count();
        let x = VertexSet::from_mask(n, mask);
        let y = VertexSet::from_mask(n, other & ((1 << n) - 1));
        prop_assert_eq!(g.cut_size(&x).unwrap(), g.cut_size(&x.complement()).unwrap());
        let mut union = x.clone();
        union.extend(&y);
        let inter = VertexSet::from_mask(n, mask & other);
        prop_assert!(
            g.cut_size(&x).unwrap() + g.cut_size(&y).unwrap()
                >= g.cut_size(&union).unwrap() + g.cut_size(&inter).unwrap()
        );
    }

    #[test]
    fn out_minus_in_is_degree_imbalance((g, fwd, mask) in with_orientation(6)) {
        let d = Orientation::new(Arc::new(g.clone()), fwd).unwrap();
        let x = VertexSet::from_mask(g.vertex_count(), mask);
        let lhs = d.out_cut(&x).unwrap() as i64 - d.in_cut(&x).unwrap() as i64;
        let rhs: i64 = x.iter().map(|v| d.out_degree(v) as i64 - d.in_degree(v) as i64).sum();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(d.out_cut(&x).unwrap() + d.in_cut(&x).unwrap(), g.cut_size(&x).unwrap());
        prop_assert_eq!(d.reversed().out_cut(&x).unwrap(), d.in_cut(&x).unwrap());
    }

    #[test]
    fn lambda_is_symmetric_and_certified(g in graph_strategy(6, 10, 3)) {
        let table = LambdaTable::compute(&g);
        for u in g.vertices() {
            for v in g.vertices() {
                if u == v {
                    continue;
                }
                let r = lambda_undirected(&g, u, v).unwrap();
                prop_assert_eq!(r.value, table.get(v, u));
                prop_assert!(r.side.contains(u) && !r.side.contains(v));
                prop_assert_eq!(g.cut_size(&r.side).unwrap(), r.value);
                prop_assert!(r.value <= g.deg(u).min(g.deg(v)));
            }
        }
    }

    #[test]
    fn directed_flow_is_bounded_by_out_cut((g, fwd, _) in with_orientation(5)) {
        let d = Orientation::new(Arc::new(g.clone()), fwd).unwrap();
        for u in g.vertices() {
            for v in g.vertices() {
                if u != v {
                    let r = lambda_directed(&d, u, v).unwrap();
                    prop_assert_eq!(d.out_cut(&r.side).unwrap(), r.value);
                    prop_assert!(r.value <= lambda_undirected(&g, u, v).unwrap().value);
                }
            }
        }
    }

    #[test]
    fn demand_is_complement_invariant((g, mask) in with_mask(6)) {
        let x = VertexSet::from_mask(g.vertex_count(), mask);
        let r = r_value(&g, &x).unwrap();
        prop_assert_eq!(r, r_value(&g, &x.complement()).unwrap());
        prop_assert_eq!(r % 2, 0);
        prop_assert!(r <= g.cut_size(&x).unwrap());
    }

    #[test]
    fn eulerian_orientation_iff_even(g in graph_strategy(6, 10, 3)) {
        let g = Arc::new(g);
        match eulerian_orientation(&g) {
            Ok(d) => {
                prop_assert!(g.is_eulerian());
                prop_assert!(d.is_eulerian());
                prop_assert!(is_well_balanced(&g, &d).unwrap().is_balanced());
            }
            Err(_) => prop_assert!(!g.is_eulerian()),
        }
    }

    #[test]
    fn extension_matches_search(g in graph_strategy(5, 6, 2), f in graph_strategy(5, 3, 1), flips in any::<u64>()) {
        // put F on the vertex set of G
        let mut b = GraphBuilder::with_vertices_of(&g);
        for p in f.pairs() {
            if p.v.0 < g.vertex_count() {
                b.add_edge(p.u, p.v, 1).unwrap();
            }
        }
        let fg = Arc::new(b.build());
        let forward = (0..fg.pairs().len()).map(|i| flips >> i & 1).collect();
        let fo = Orientation::new(fg, forward).unwrap();
        let g = Arc::new(g);
        let parity_ok = g.vertices().all(|v| (g.deg(v) + fo.graph().deg(v)) % 2 == 0);
        match extend_to_eulerian(&g, &fo) {
            Err(_) => prop_assert!(!parity_ok),
            Ok(ExtensionOutcome::Extended(d)) => {
                prop_assert!(d.sum(&fo).unwrap().is_eulerian());
            }
            Ok(ExtensionOutcome::Infeasible(x)) => {
                prop_assert!(!check_ff_condition(&g, &fo, &x).unwrap());
                prop_assert!(brute_eulerian_extension(&g, &fo, &Limits::default()).unwrap().is_none());
            }
        }
    }

    #[test]
    fn well_balanced_orientation_always_found(g in graph_strategy(5, 6, 2)) {
        let d = brute_wbo_exists(&g, &Limits::default()).unwrap();
        prop_assert!(is_well_balanced(&g, &d).unwrap().is_balanced());
    }

    #[test]
    fn document_round_trip(g in graph_strategy(7, 12, 4)) {
        let text = Document::from_graph("graph", &g).to_text();
        let doc = Document::parse(&text).unwrap();
        prop_assert_eq!(doc.graph().unwrap(), g);
        prop_assert_eq!(doc.to_text(), text);
    }

    #[test]
    fn orientation_round_trip((g, fwd, _) in with_orientation(6)) {
        let g = Arc::new(g);
        let d = Orientation::new(Arc::clone(&g), fwd).unwrap();
        let text = Document::from_orientation("orientation", &d).to_text();
        let back = Document::parse(&text).unwrap().orientation_of(&g).unwrap();
        prop_assert_eq!(back, d);
    }
}
