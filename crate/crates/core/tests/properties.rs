mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use hsplit_core::flow::{
    conn_table_elements_with, element_connectivity, element_disjoint_paths, hyperedge_connectivity,
};
use hsplit_core::format::{parse_hypergraph, write_hypergraph, Format};
use hsplit_core::oracle::{oracle_element_conn, oracle_lambda};
use hsplit_core::reduction::{is_deletion_preserving_with, maximal_preserving_deletions, reduce_to_stable};
use hsplit_core::{
    conn_table_hyper, hypergraph_equal, incidence_graph, CutSide, EdgeId, Exec, HyperedgeId, Hypergraph,
    SplitOffOp, VertexId,
};

fn cut_from_mask(h: &Hypergraph, mask: u32) -> CutSide {
    CutSide::new(h.vertices().filter(|v| mask >> v.0 & 1 == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn delta_is_symmetric(seed in 0u64..1_000_000, mask in any::<u32>()) {
        let h = common::small_hypergraph(seed);
        let side = cut_from_mask(&h, mask);
        let other = side.complement(&h);
        match h.delta(&side) {
            Ok(d) => prop_assert_eq!(d, h.delta(&other).unwrap()),
            Err(_) => prop_assert!(side.vertices().is_empty() || other.vertices().is_empty()),
        }
    }

    #[test]
    fn ops_keep_hyperedges_valid(seed in 0u64..1_000_000, pick in any::<u64>()) {
        let h = common::small_hypergraph(seed);
        let s = VertexId((pick % h.vertex_count() as u64) as u32);
        let through = h.incident(s);
        for &e in &through {
            let out = h.apply_op(s, SplitOffOp::Trim { edge: e }).unwrap();
            prop_assert!(out.edge_count() == h.edge_count() || out.edge_count() + 1 == h.edge_count());
            prop_assert!(out.hyperedges().all(|(_, m)| m.len() >= 2));
            for &f in &through {
                if let Ok(out) = h.apply_op(s, SplitOffOp::Merge { keep: e, absorb: f }) {
                    prop_assert_eq!(out.edge_count() + 1, h.edge_count());
                    prop_assert!(out.hyperedges().all(|(_, m)| m.len() >= 2));
                }
            }
        }
    }

    #[test]
    fn singleton_drop_changes_no_cut(seed in 0u64..1_000_000, mask in any::<u32>()) {
        let h = common::small_hypergraph(seed);
        let side = cut_from_mask(&h, mask);
        let Ok(before) = h.delta(&side) else { return Ok(()) };
        for v in h.vertices() {
            for (e, m) in h.hyperedges() {
                if m.len() == 2 && m.contains(&v) {
                    let out = h.apply_op(v, SplitOffOp::Trim { edge: e }).unwrap();
                    let after = out.delta(&side).unwrap();
                    let mut expect = before.clone();
                    expect.remove(&e);
                    prop_assert_eq!(after, expect);
                }
            }
        }
    }

    #[test]
    fn incidence_graph_is_bipartite(seed in 0u64..1_000_000) {
        let h = common::small_hypergraph(seed);
        let inc = incidence_graph(&h);
        for (_, a, b) in inc.instance.edges() {
            prop_assert_ne!(inc.instance.is_terminal(a), inc.instance.is_terminal(b));
        }
        for (e, m) in h.hyperedges() {
            prop_assert_eq!(inc.instance.degree(inc.edge_node(e).unwrap()), m.len());
        }
    }

    #[test]
    fn lambda_equals_min_cut_enumeration(seed in 0u64..1_000_000) {
        let h = common::small_hypergraph(seed);
        let t = conn_table_hyper(&h);
        for (a, b, v) in t.iter() {
            prop_assert_eq!(v, oracle_lambda(&h, a, b).unwrap());
            prop_assert_eq!(v, hyperedge_connectivity(&h, a, b).unwrap());
        }
    }

    #[test]
    fn flow_decomposition_gives_element_disjoint_paths(seed in 0u64..1_000_000) {
        let inst = common::element_instance(seed, 2, 9, 16);
        let ts = inst.terminals();
        for (i, &u) in ts.iter().enumerate() {
            for &v in &ts[i + 1..] {
                let k = element_connectivity(&inst, u, v).unwrap();
                let paths = element_disjoint_paths(&inst, u, v).unwrap();
                prop_assert_eq!(paths.len() as u32, k);
                let mut used_nodes = BTreeSet::new();
                let mut used_edges = BTreeSet::new();
                for p in &paths {
                    prop_assert_eq!(p.nodes.first(), Some(&u));
                    prop_assert_eq!(p.nodes.last(), Some(&v));
                    prop_assert_eq!(p.edges.len() + 1, p.nodes.len());
                    for (w, &e) in p.nodes.windows(2).zip(&p.edges) {
                        let (x, y) = inst.endpoints(e).unwrap();
                        prop_assert!((x, y) == (w[0], w[1]) || (y, x) == (w[0], w[1]));
                        prop_assert!(used_edges.insert(e));
                    }
                    for &x in &p.nodes {
                        if !inst.is_terminal(x) {
                            prop_assert!(used_nodes.insert(x));
                        }
                    }
                }
                if inst.element_count() <= 14 {
                    prop_assert_eq!(k, oracle_element_conn(&inst, u, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn adding_a_hyperedge_never_lowers_lambda(seed in 0u64..1_000_000, extra in any::<u32>()) {
        let h = common::small_hypergraph(seed);
        let n = h.vertex_count() as u32;
        let a = extra % n;
        let b = (a + 1 + (extra / n) % (n - 1)) % n;
        let mut edges: Vec<(HyperedgeId, Vec<VertexId>)> =
            h.hyperedges().map(|(id, m)| (id, m.to_vec())).collect();
        edges.push((HyperedgeId(1000), vec![VertexId(a), VertexId(b)]));
        let bigger = Hypergraph::from_parts(h.names().to_vec(), edges).unwrap();
        let before = conn_table_hyper(&h);
        let after = conn_table_hyper(&bigger);
        for (x, y, v) in before.iter() {
            prop_assert!(after.get(x, y).unwrap() >= v);
        }
    }

    #[test]
    fn reduce_to_stable_preserves_and_stabilizes(seed in 0u64..1_000_000) {
        let inst = common::element_instance(seed, 3, 9, 14);
        let base = conn_table_elements_with(&inst, Exec::Sequential);
        let (out, trace) = reduce_to_stable(&inst).unwrap();
        prop_assert!(out.non_terminal_edges().is_empty());
        prop_assert_eq!(conn_table_elements_with(&out, Exec::Sequential), base);
        // each live non-terminal stands for a connected set of original non-terminals
        for (rep, group) in &trace.groups {
            if !out.contains_node(*rep) || inst.is_terminal(*rep) {
                continue;
            }
            prop_assert!(group.iter().all(|&x| !inst.is_terminal(x)));
            let start = *group.iter().next().unwrap();
            let mut seen = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for y in inst.neighbors(x) {
                    if group.contains(&y) && seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            prop_assert_eq!(&seen, group);
        }
    }

    #[test]
    fn greedy_deletions_are_maximal(seed in 0u64..1_000_000) {
        let inst = common::element_instance(seed, 3, 8, 14);
        let all: Vec<EdgeId> = inst.edges().map(|(e, _, _)| e).collect();
        let base = conn_table_elements_with(&inst, Exec::Sequential);
        let (out, deleted) = maximal_preserving_deletions(&inst, &all).unwrap();
        prop_assert_eq!(conn_table_elements_with(&out, Exec::Sequential), base.clone());
        prop_assert_eq!(out.edge_count() + deleted.len(), inst.edge_count());
        for (e, _, _) in out.edges() {
            prop_assert!(!is_deletion_preserving_with(&out, e, &base, Exec::Sequential).unwrap());
        }
    }

    #[test]
    fn written_files_reparse_equal(seed in 0u64..1_000_000) {
        let h = common::small_hypergraph(seed);
        for format in [Format::Json, Format::Text] {
            let text = write_hypergraph(&h, format).unwrap();
            let back = parse_hypergraph(&text, format).unwrap();
            prop_assert!(hypergraph_equal(&h, &back));
        }
    }

    #[test]
    fn parallel_and_sequential_tables_agree(seed in 0u64..1_000_000) {
        let inst = common::element_instance(seed, 2, 10, 20);
        prop_assert_eq!(
            conn_table_elements_with(&inst, Exec::Sequential),
            conn_table_elements_with(&inst, Exec::Parallel)
        );
    }
}
