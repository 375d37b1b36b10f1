//! Exact connectivity queries by integral max-flow.
//!
//! Element-connectivity is computed on a split network: every node `x`
//! becomes `x_in → x_out`, with capacity 1 for non-terminals and capacity
//! `deg(x)` for terminals other than the endpoints; every undirected edge
//! becomes a pair of unit arcs `a_out → b_in`, `b_out → a_in`.
//! Hyperedge-connectivity is element-connectivity of the incidence graph.

mod instance;
mod network;

use std::collections::BTreeMap;

pub use instance::{EdgeId, ElementConnInstance, NodeId};
pub use network::{FlowNetwork, FlowSolution};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::incidence::incidence_graph;
use crate::par::Exec;

/// Connectivity value for every unordered pair of distinct keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnTable<K: Ord> {
    entries: BTreeMap<(K, K), u32>,
}

impl<K: Ord + Copy> ConnTable<K> {
    pub fn new() -> Self {
        ConnTable { entries: BTreeMap::new() }
    }

    fn key(a: K, b: K) -> (K, K) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn insert(&mut self, a: K, b: K, value: u32) {
        self.entries.insert(Self::key(a, b), value);
    }

    pub fn get(&self, a: K, b: K) -> Option<u32> {
        self.entries.get(&Self::key(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries as `(smaller key, larger key, value)`, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (K, K, u32)> + '_ {
        self.entries.iter().map(|(&(a, b), &v)| (a, b, v))
    }

    /// Keeps the entries whose both keys satisfy `keep`.
    pub fn restrict(&self, keep: impl Fn(K) -> bool) -> Self {
        ConnTable {
            entries: self
                .entries
                .iter()
                .filter(|(&(a, b), _)| keep(a) && keep(b))
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    pub fn map_keys<L: Ord + Copy>(&self, f: impl Fn(K) -> L) -> ConnTable<L> {
        let mut out = ConnTable::new();
        for (a, b, v) in self.iter() {
            out.insert(f(a), f(b), v);
        }
        out
    }

    /// Pairs whose values differ, or that are present in only one table.
    pub fn mismatches(&self, other: &Self) -> Vec<(K, K)> {
        let mut out: Vec<(K, K)> = self
            .entries
            .iter()
            .filter(|(k, v)| other.entries.get(k) != Some(v))
            .map(|(&k, _)| k)
            .collect();
        out.extend(other.entries.keys().filter(|k| !self.entries.contains_key(k)).copied());
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl<K: Ord + Copy> Default for ConnTable<K> {
    fn default() -> Self {
        Self::new()
    }
}

/// Unordered pairs of distinct items, in lexicographic order.
pub(crate) fn pairs<K: Copy>(items: &[K]) -> Vec<(K, K)> {
    let mut out = Vec::with_capacity(items.len() * items.len().saturating_sub(1) / 2);
    for (i, &a) in items.iter().enumerate() {
        for &b in &items[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

struct SplitNetwork {
    net: FlowNetwork,
    /// `(edge, tail, head)` for each edge arc, in arc-handle order.
    edge_arcs: Vec<(EdgeId, NodeId, NodeId)>,
    first_edge_arc: usize,
}

fn split_network(inst: &ElementConnInstance, u: NodeId, v: NodeId) -> SplitNetwork {
    let n = inst.node_bound();
    let node_in = |x: NodeId| 2 * x.index();
    let node_out = |x: NodeId| 2 * x.index() + 1;
    let mut net = FlowNetwork::new(2 * n, node_out(u), node_in(v));
    let mut degree = vec![0u64; n];
    for (_, a, b) in inst.edges() {
        degree[a.index()] += 1;
        degree[b.index()] += 1;
    }
    for x in inst.nodes() {
        if x == u || x == v {
            continue;
        }
        let cap = if inst.is_terminal(x) { degree[x.index()] } else { 1 };
        if cap > 0 {
            net.add_arc(node_in(x), node_out(x), cap);
        }
    }
    let first_edge_arc = net.arc_count();
    let mut edge_arcs = Vec::with_capacity(2 * inst.edge_count());
    for (e, a, b) in inst.edges() {
        net.add_arc(node_out(a), node_in(b), 1);
        edge_arcs.push((e, a, b));
        net.add_arc(node_out(b), node_in(a), 1);
        edge_arcs.push((e, b, a));
    }
    SplitNetwork { net, edge_arcs, first_edge_arc }
}

fn check_terminal_pair(inst: &ElementConnInstance, u: NodeId, v: NodeId) -> Result<()> {
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
    Ok(())
}

fn element_conn_unchecked(inst: &ElementConnInstance, u: NodeId, v: NodeId) -> u32 {
    let sn = split_network(inst, u, v);
    // u != v, so the only failure mode of max_flow cannot occur
    sn.net.max_flow().expect("distinct source and sink") as u32
}

/// `κ′(u, v)`: the minimum number of elements whose deletion disconnects
/// terminals `u` and `v`.
pub fn element_connectivity(inst: &ElementConnInstance, u: NodeId, v: NodeId) -> Result<u32> {
    check_terminal_pair(inst, u, v)?;
    Ok(element_conn_unchecked(inst, u, v))
}

/// A `u`–`v` path as alternating nodes and the edges between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementPath {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
}

/// A maximum family of pairwise element-disjoint `u`–`v` paths, recovered
/// by decomposing an integral maximum flow.
pub fn element_disjoint_paths(inst: &ElementConnInstance, u: NodeId, v: NodeId) -> Result<Vec<ElementPath>> {
    check_terminal_pair(inst, u, v)?;
    let sn = split_network(inst, u, v);
    let sol = sn.net.solve()?;
    let mut remaining: BTreeMap<EdgeId, (NodeId, NodeId, i64)> = BTreeMap::new();
    for (k, &(e, tail, head)) in sn.edge_arcs.iter().enumerate() {
        let f = sol.arc_flow[sn.first_edge_arc + k] as i64;
        let entry = remaining.entry(e).or_insert((tail, head, 0));
        // net flow measured along the first recorded orientation
        if entry.0 == tail {
            entry.2 += f;
        } else {
            entry.2 -= f;
        }
    }
    let mut out_arcs: BTreeMap<NodeId, Vec<(EdgeId, NodeId)>> = BTreeMap::new();
    for (&e, &(a, b, f)) in &remaining {
        match f.signum() {
            1 => out_arcs.entry(a).or_default().push((e, b)),
            -1 => out_arcs.entry(b).or_default().push((e, a)),
            _ => {}
        }
    }
    let mut paths = Vec::new();
    for _ in 0..sol.value {
        let mut nodes = vec![u];
        let mut edges = Vec::new();
        let mut at = u;
        while at != v {
            let (e, next) = out_arcs
                .get_mut(&at)
                .and_then(Vec::pop)
                .ok_or_else(|| Error::internal("flow decomposition ran out of arcs"))?;
            if let Some(pos) = nodes.iter().position(|&x| x == next) {
                // drop the cycle just closed
                nodes.truncate(pos + 1);
                edges.truncate(pos);
            } else {
                nodes.push(next);
                edges.push(e);
            }
            at = next;
        }
        paths.push(ElementPath { nodes, edges });
    }
    Ok(paths)
}

/// Table of `κ′` over all pairs of distinct terminals. Empty when there
/// are fewer than two terminals.
pub fn conn_table_elements(inst: &ElementConnInstance) -> ConnTable<NodeId> {
    conn_table_elements_with(inst, Exec::default())
}

pub fn conn_table_elements_with(inst: &ElementConnInstance, exec: Exec) -> ConnTable<NodeId> {
    table_over(inst, &inst.terminals(), exec)
}

pub(crate) fn table_over(inst: &ElementConnInstance, terminals: &[NodeId], exec: Exec) -> ConnTable<NodeId> {
    let ps = pairs(terminals);
    let values = exec.map(&ps, |&(a, b)| element_conn_unchecked(inst, a, b));
    let mut table = ConnTable::new();
    for (&(a, b), v) in ps.iter().zip(values) {
        table.insert(a, b, v);
    }
    table
}

/// True iff every pair of `baseline` has the same `κ′` in `inst`.
pub(crate) fn matches_table(inst: &ElementConnInstance, baseline: &ConnTable<NodeId>, exec: Exec) -> bool {
    let entries: Vec<(NodeId, NodeId, u32)> = baseline.iter().collect();
    exec.all(&entries, |&(a, b, want)| {
        inst.contains_node(a) && inst.contains_node(b) && element_conn_unchecked(inst, a, b) == want
    })
}

/// `λ_H(u, v)`: the minimum number of hyperedges crossing a cut that
/// separates `u` from `v`.
pub fn hyperedge_connectivity(h: &Hypergraph, u: VertexId, v: VertexId) -> Result<u32> {
    for x in [u, v] {
        if !h.contains_vertex(x) {
            return Err(Error::UnknownVertexId(x));
        }
    }
    if u == v {
        return Err(Error::SameEndpoints);
    }
    let inc = incidence_graph(h);
    element_connectivity(&inc.instance, inc.vertex_node(u), inc.vertex_node(v))
}

/// Table of `λ_H` over all pairs of distinct vertices.
pub fn conn_table_hyper(h: &Hypergraph) -> ConnTable<VertexId> {
    conn_table_hyper_with(h, Exec::default())
}

pub fn conn_table_hyper_with(h: &Hypergraph, exec: Exec) -> ConnTable<VertexId> {
    let inc = incidence_graph(h);
    let nodes: Vec<NodeId> = h.vertices().map(|v| inc.vertex_node(v)).collect();
    table_over(&inc.instance, &nodes, exec).map_keys(|n| inc.node_vertex(n).expect("vertex node"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terminals_and_nonterminals(nodes: &[(&str, bool)], edges: &[(&str, &str)]) -> ElementConnInstance {
        let mut g = ElementConnInstance::new();
        for &(name, t) in nodes {
            g.add_node(name, t);
        }
        for &(a, b) in edges {
            let a = g.node_by_label(a).unwrap();
            let b = g.node_by_label(b).unwrap();
            g.add_edge(a, b).unwrap();
        }
        g
    }

    fn id(g: &ElementConnInstance, name: &str) -> NodeId {
        g.node_by_label(name).unwrap()
    }

    #[test]
    fn star_center_is_single_cut_element() {
        let g = terminals_and_nonterminals(
            &[("u", true), ("v", true), ("w", true), ("c", false)],
            &[("u", "c"), ("v", "c"), ("w", "c")],
        );
        assert_eq!(element_connectivity(&g, id(&g, "u"), id(&g, "v")).unwrap(), 1);
    }

    #[test]
    fn parallel_edges_are_separate_elements() {
        for k in 1..5 {
            let edges = vec![("u", "v"); k];
            let g = terminals_and_nonterminals(&[("u", true), ("v", true)], &edges);
            assert_eq!(element_connectivity(&g, id(&g, "u"), id(&g, "v")).unwrap(), k as u32);
        }
    }

    #[test]
    fn four_cycle_with_chord() {
        // brute-force enumeration of element subsets gives 2 (see oracle tests)
        let g = terminals_and_nonterminals(
            &[("u", true), ("p", false), ("v", true), ("q", false)],
            &[("u", "p"), ("p", "v"), ("v", "q"), ("q", "u"), ("p", "q")],
        );
        assert_eq!(element_connectivity(&g, id(&g, "u"), id(&g, "v")).unwrap(), 2);
    }

    #[test]
    fn terminal_transit_uses_degree_capacity() {
        // u and v both attach to terminal w twice over; w may carry two paths.
        let g = terminals_and_nonterminals(
            &[("u", true), ("v", true), ("w", true)],
            &[("u", "w"), ("u", "w"), ("w", "v"), ("w", "v")],
        );
        assert_eq!(element_connectivity(&g, id(&g, "u"), id(&g, "v")).unwrap(), 2);
    }

    #[test]
    fn endpoint_errors() {
        let g = terminals_and_nonterminals(&[("u", true), ("p", false)], &[("u", "p")]);
        let (u, p) = (id(&g, "u"), id(&g, "p"));
        assert_eq!(element_connectivity(&g, u, u), Err(Error::SameEndpoints));
        assert_eq!(element_connectivity(&g, u, p), Err(Error::NotTerminal(p)));
    }

    #[test]
    fn hyperedge_connectivity_examples() {
        let single = Hypergraph::from_names(["a", "b", "c"], [["a", "b", "c"]]).unwrap();
        let (a, b) = (single.vertex("a").unwrap(), single.vertex("b").unwrap());
        assert_eq!(hyperedge_connectivity(&single, a, b).unwrap(), 1);
        assert_eq!(hyperedge_connectivity(&single, a, a), Err(Error::SameEndpoints));

        let tri = Hypergraph::from_names(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        assert_eq!(hyperedge_connectivity(&tri, a, b).unwrap(), 2);

        let apart = Hypergraph::from_names(["a", "b", "c"], [["b", "c"]]).unwrap();
        assert_eq!(hyperedge_connectivity(&apart, a, b).unwrap(), 0);
    }

    #[test]
    fn tables() {
        let tri = Hypergraph::from_names(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        let t = conn_table_hyper(&tri);
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|(_, _, v)| v == 2));
        assert_eq!(t.get(VertexId(2), VertexId(0)), t.get(VertexId(0), VertexId(2)));

        let two = terminals_and_nonterminals(&[("u", true), ("v", true), ("p", false)], &[]);
        assert_eq!(conn_table_elements(&two).len(), 1);
        let one = terminals_and_nonterminals(&[("u", true), ("p", false)], &[("u", "p")]);
        assert!(conn_table_elements(&one).is_empty());
    }

    #[test]
    fn decomposition_yields_disjoint_paths() {
        let g = terminals_and_nonterminals(
            &[("u", true), ("p", false), ("v", true), ("q", false), ("w", true)],
            &[("u", "p"), ("p", "v"), ("v", "q"), ("q", "u"), ("p", "q"), ("u", "w"), ("w", "v")],
        );
        let (u, v) = (id(&g, "u"), id(&g, "v"));
        let paths = element_disjoint_paths(&g, u, v).unwrap();
        assert_eq!(paths.len() as u32, element_connectivity(&g, u, v).unwrap());
        assert_eq!(paths.len(), 3);
    }
}
