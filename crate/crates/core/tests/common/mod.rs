#![allow(dead_code)]

use hsplit_core::oracle::{random_element_instance, random_hypergraph, GenParams, SeededRng};
use hsplit_core::{ElementConnInstance, Hypergraph, VertexId};

/// Random hypergraph with n ≤ 8, m ≤ 12, r ≤ 4, drawn from `seed`.
pub fn small_hypergraph(seed: u64) -> Hypergraph {
    let mut rng = SeededRng::new(seed ^ 0x5eed_0001);
    let n = rng.range(2, 8);
    let m = rng.range(0, 12);
    let r = rng.range(2, n.min(4));
    random_hypergraph(GenParams { n, m, r, seed }).expect("valid params")
}

/// `small_hypergraph(seed)` plus a split vertex chosen from the same seed.
pub fn split_case(seed: u64) -> (Hypergraph, VertexId) {
    let h = small_hypergraph(seed);
    let mut rng = SeededRng::new(seed ^ 0x5eed_0002);
    let s = VertexId(rng.below(h.vertex_count() as u64) as u32);
    (h, s)
}

/// Random element instance with at most `max_n` nodes and `max_m` edges.
pub fn element_instance(seed: u64, min_n: usize, max_n: usize, max_m: usize) -> ElementConnInstance {
    let mut rng = SeededRng::new(seed ^ 0x5eed_0003);
    let n = rng.range(min_n, max_n);
    let m = rng.range(0, max_m);
    random_element_instance(GenParams { n, m, r: 2, seed }).expect("valid params")
}

pub fn report(criterion: &str, pass: bool, detail: impl std::fmt::Display) {
    println!("[{}] {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
}
