//! Brute-force ground truth for small instances, and seeded generators.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded with
//! `seed_from_u64`. Bounded integers are drawn from `next_u64` by rejection
//! (values at or above the largest multiple of the bound are redrawn, then
//! reduced modulo the bound), so a seed gives the same instance on every
//! platform and build.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::flow::{EdgeId, ElementConnInstance, NodeId};
use crate::hypergraph::{HyperedgeId, Hypergraph, VertexId};

/// Largest vertex count `oracle_lambda` enumerates cuts for.
pub const MAX_ORACLE_VERTICES: usize = 20;
/// Largest element count `oracle_element_conn` enumerates subsets for.
pub const MAX_ORACLE_ELEMENTS: usize = 24;

/// Minimum `|δ(S)|` over all `S` containing exactly one of `u`, `v`.
pub fn oracle_lambda(h: &Hypergraph, u: VertexId, v: VertexId) -> Result<u32> {
    let n = h.vertex_count();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::TooLarge { size: n, bound: MAX_ORACLE_VERTICES });
    }
    for x in [u, v] {
        if !h.contains_vertex(x) {
            return Err(Error::UnknownVertexId(x));
        }
    }
    if u == v {
        return Err(Error::SameEndpoints);
    }
    let masks: Vec<u32> = h
        .hyperedges()
        .map(|(_, m)| m.iter().fold(0u32, |acc, x| acc | (1 << x.0)))
        .collect();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let free: Vec<u32> = (0..n as u32).filter(|&x| x != u.0 && x != v.0).collect();
    let mut best = u32::MAX;
    for pick in 0u32..(1 << free.len()) {
        let mut side = 1u32 << u.0;
        for (i, &x) in free.iter().enumerate() {
            if pick >> i & 1 == 1 {
                side |= 1 << x;
            }
        }
        let outside = full & !side;
        let crossing = masks.iter().filter(|&&e| e & side != 0 && e & outside != 0).count() as u32;
        best = best.min(crossing);
    }
    Ok(best)
}

/// Smallest number of elements (non-terminals and edges) whose deletion
/// disconnects terminals `u` and `v`, by subsets of increasing size.
pub fn oracle_element_conn(inst: &ElementConnInstance, u: NodeId, v: NodeId) -> Result<u32> {
    for x in [u, v] {
        if !inst.contains_node(x) {
            return Err(Error::UnknownNode(x));
        }
        if !inst.is_terminal(x) {
            return Err(Error::NotTerminal(x));
        }
    }
    if u == v {
        return Err(Error::SameEndpoints);
    }
    enum Element {
        Node(NodeId),
        Edge(EdgeId),
    }
    let elements: Vec<Element> = inst
        .non_terminals()
        .into_iter()
        .map(Element::Node)
        .chain(inst.edges().map(|(e, _, _)| Element::Edge(e)))
        .collect();
    let count = elements.len();
    if count > MAX_ORACLE_ELEMENTS {
        return Err(Error::TooLarge { size: count, bound: MAX_ORACLE_ELEMENTS });
    }
    let mut removed_nodes = vec![false; inst.node_bound()];
    let mut removed_edges = vec![false; inst.edge_bound()];
    for k in 0..=count {
        let mut found = false;
        for_each_subset(count, k, |mask| {
            for (i, el) in elements.iter().enumerate() {
                let on = mask >> i & 1 == 1;
                match *el {
                    Element::Node(x) => removed_nodes[x.index()] = on,
                    Element::Edge(e) => removed_edges[e.index()] = on,
                }
            }
            found = !inst.connected_avoiding(u, v, &removed_nodes, &removed_edges);
            found
        });
        if found {
            return Ok(k as u32);
        }
    }
    Err(Error::internal("terminals stay connected with every element removed"))
}

/// Calls `f` on every `k`-subset of `0..n` as a bitmask, stopping once it
/// returns true.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(u64) -> bool) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let limit = 1u64 << n;
    let mut mask = (1u64 << k) - 1;
    while mask < limit {
        if f(mask) {
            return;
        }
        // Gosper's hack: next mask with the same popcount
        let low = mask & mask.wrapping_neg();
        let ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    /// Vertex (node) count.
    pub n: usize,
    /// Hyperedge (edge) count.
    pub m: usize,
    /// Largest hyperedge size; unused by [`random_element_instance`].
    pub r: usize,
    pub seed: u64,
}

/// Seeded generator with portable bounded sampling.
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound`. `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.0.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below((hi - lo + 1) as u64) as usize
    }

    /// `k` distinct values of `0..n`, sorted, uniform among `k`-subsets.
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        let mut out = pool[..k].to_vec();
        out.sort_unstable();
        out
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `m` hyperedges on vertices `v0 … v{n-1}`, each uniform among all
/// vertex subsets of size `2..=r`.
pub fn random_hypergraph(p: GenParams) -> Result<Hypergraph> {
    if p.n < 2 || p.r < 2 || p.r > p.n {
        return Err(Error::InvalidParams(format!("need 2 <= r <= n, got n={} r={}", p.n, p.r)));
    }
    if p.n > 64 {
        return Err(Error::InvalidParams(format!("n={} exceeds the generator limit of 64", p.n)));
    }
    let weights: Vec<u128> = (2..=p.r).map(|k| binomial(p.n, k)).collect();
    let total: u128 = weights.iter().sum();
    let total = u64::try_from(total).map_err(|_| Error::InvalidParams("too many subsets".into()))?;
    let mut rng = SeededRng::new(p.seed);
    let names: Vec<String> = (0..p.n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::with_capacity(p.m);
    for i in 0..p.m {
        let mut ticket = rng.below(total) as u128;
        let mut size = 2;
        for (k, &w) in (2..).zip(&weights) {
            if ticket < w {
                size = k;
                break;
            }
            ticket -= w;
        }
        let members = rng.subset(p.n, size).into_iter().map(|x| VertexId(x as u32)).collect();
        edges.push((HyperedgeId(i as u32), members));
    }
    Hypergraph::from_parts(names, edges)
}

/// `m` edges on nodes `v0 … v{n-1}`, endpoints uniform among distinct
/// pairs (parallel edges allowed); a uniform random subset of size
/// uniform in `2..=n` is made terminal.
pub fn random_element_instance(p: GenParams) -> Result<ElementConnInstance> {
    if p.n < 2 {
        return Err(Error::InvalidParams(format!("need n >= 2, got n={}", p.n)));
    }
    let mut rng = SeededRng::new(p.seed);
    let t = rng.range(2, p.n);
    let terminals = rng.subset(p.n, t);
    let mut inst = ElementConnInstance::new();
    for i in 0..p.n {
        inst.add_node(format!("v{i}"), terminals.binary_search(&i).is_ok());
    }
    for _ in 0..p.m {
        let pair = rng.subset(p.n, 2);
        inst.add_edge(NodeId(pair[0] as u32), NodeId(pair[1] as u32))?;
    }
    Ok(inst)
}
