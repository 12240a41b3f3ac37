use proptest::prelude::*;

use ssnc_core::completion::{good_completion, snp_from_completion};
use ssnc_core::dependency::{analyze, convenient_orientation, is_good_edge};
use ssnc_core::format::{parse_graph, write_graph};
use ssnc_core::generators::{
    random_good_instance, random_instance, random_oriented_graph, random_weights, InstanceClass, InstanceSpec,
};
use ssnc_core::order::{
    blocks_contiguous, classify_vertices, good_median_order_with, median_order_exact, median_order_heuristic, order_weight,
    sedimentation, DEFAULT_EXACT_CAP,
};
use ssnc_core::stars::find_snp_two_stars;
use ssnc_core::util::weights_equal;
use ssnc_core::verify::two_star_instance;
use ssnc_core::OrientedGraph;

fn graph(max_n: usize, p_missing: f64) -> impl Strategy<Value = OrientedGraph> {
    (1..=max_n, any::<u64>()).prop_map(move |(n, seed)| random_oriented_graph(n, p_missing, seed).unwrap())
}

fn weighted(max_n: usize) -> impl Strategy<Value = OrientedGraph> {
    (graph(max_n, 0.3), any::<u64>()).prop_map(|(g, seed)| random_weights(&g, seed))
}

fn matching(max_n: usize) -> impl Strategy<Value = OrientedGraph> {
    (2..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let k = (seed % (n as u64 / 2 + 1)) as usize;
        random_instance(&InstanceSpec { k, ..InstanceSpec::new(InstanceClass::MissingMatching, n, seed) }).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn write_then_parse_is_identity(g in weighted(12)) {
        prop_assert_eq!(parse_graph(&write_graph(&g, &["round trip".into()])).unwrap(), g);
    }

    #[test]
    fn generators_are_deterministic_and_keep_their_class(n in 2usize..14, seed in any::<u64>()) {
        let k = (seed % (n as u64 / 2 + 1)) as usize;
        let spec = InstanceSpec { k, ..InstanceSpec::new(InstanceClass::MissingMatching, n, seed) };
        let g = random_instance(&spec).unwrap();
        prop_assert_eq!(&g, &random_instance(&spec).unwrap());
        let mg = g.missing_graph();
        prop_assert_eq!(mg.edges.len(), k);
        prop_assert!(mg.is_disjoint_paths(1));
    }

    #[test]
    fn good_edges_are_delta_sources(g in graph(8, 0.3)) {
        let a = analyze(&g);
        for (i, &e) in a.delta.nodes.iter().enumerate() {
            prop_assert_eq!(is_good_edge(&g, e).unwrap(), a.delta.in_degree(i) == 0);
        }
    }

    #[test]
    fn convenient_orientation_keeps_other_neighbourhoods(g in graph(8, 0.3)) {
        let a = analyze(&g);
        for (i, &e) in a.delta.nodes.iter().enumerate() {
            if a.delta.in_degree(i) > 0 {
                continue;
            }
            let (u, v) = convenient_orientation(&g, e).unwrap();
            let h = g.with_arc(u, v).unwrap();
            for x in (0..g.n()).filter(|&x| x != u && x != v) {
                prop_assert_eq!(g.out(x), h.out(x));
                prop_assert_eq!(g.second_out(x), h.second_out(x));
            }
        }
    }

    #[test]
    fn exact_order_dominates_heuristic(g in weighted(9), seed in any::<u64>()) {
        let exact = median_order_exact(&g, None).unwrap();
        let heur = median_order_heuristic(&g, seed);
        prop_assert!(weights_equal(exact.weight, order_weight(&g, &exact.seq).unwrap()));
        prop_assert!(weights_equal(heur.weight, order_weight(&g, &heur.seq).unwrap()));
        prop_assert!(heur.weight <= exact.weight + 1e-9);
    }

    #[test]
    fn good_and_bad_vertices_partition_the_non_out_neighbours(g in graph(9, 0.2), seed in any::<u64>()) {
        let l = median_order_heuristic(&g, seed);
        let oa = classify_vertices(&g, &l.seq).unwrap();
        let out = g.out(oa.feed);
        prop_assert!(oa.good.intersection(oa.bad).is_empty());
        prop_assert_eq!(oa.good.union(oa.bad).union(out).with(oa.feed), g.vertices());
        prop_assert!(oa.good.difference(g.second_out(oa.feed)).is_empty());
    }

    #[test]
    fn tournament_feed_has_the_snp(n in 1usize..9, seed in any::<u64>()) {
        let g = random_oriented_graph(n, 0.0, seed).unwrap();
        let f = median_order_exact(&g, None).unwrap().feed();
        prop_assert!(g.has_snp(f).unwrap());
    }

    #[test]
    fn sedimentation_keeps_weight_and_blocks(max_n in 4usize..12, seed in any::<u64>()) {
        let g = random_weights(&random_good_instance(max_n, seed).unwrap(), seed);
        let blocks = analyze(&g).partition();
        let l = good_median_order_with(&g, &blocks, DEFAULT_EXACT_CAP).unwrap();
        let s = sedimentation(&g, &l, &blocks).unwrap();
        prop_assert!(weights_equal(s.weight, l.weight));
        prop_assert!(weights_equal(order_weight(&g, &s.seq).unwrap(), l.weight));
        prop_assert!(blocks_contiguous(&s.seq, &blocks));
    }

    #[test]
    fn delta_degrees_are_bounded_on_matchings(g in matching(12)) {
        let d = analyze(&g).delta;
        for v in 0..d.len() {
            prop_assert!(d.in_degree(v) <= 2 && d.out_degree(v) <= 2);
        }
    }

    #[test]
    fn completion_extends_and_certifies(g in matching(12)) {
        let c = good_completion(&g).unwrap();
        for (u, v) in g.arcs() {
            prop_assert!(c.completed.has_arc(u, v));
        }
        prop_assert!(analyze(&c.completed).is_good());
        let cert = snp_from_completion(&g, &c).unwrap();
        prop_assert!(g.has_snp(cert.vertex).unwrap());
    }

    #[test]
    fn two_star_certificate_holds(seed in any::<u64>()) {
        if let Some(g) = two_star_instance(seed, 9) {
            let cert = find_snp_two_stars(&g).unwrap();
            prop_assert!(g.has_snp(cert.vertex).unwrap());
        }
    }
}
