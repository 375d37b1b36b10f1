//! Bipartite incidence graph of a hypergraph, viewed as an
//! element-connectivity instance (vertices are terminals, hyperedges are
//! non-terminals).

use std::collections::BTreeMap;

use crate::flow::{ElementConnInstance, NodeId};
use crate::hypergraph::{HyperedgeId, Hypergraph, VertexId};

/// Incidence instance plus the vertex/hyperedge ↔ node bijections.
///
/// Vertex `v` is node `v` (same index); hyperedges follow in ascending id
/// order.
#[derive(Debug, Clone)]
pub struct Incidence {
    pub instance: ElementConnInstance,
    vertex_count: usize,
    edge_nodes: BTreeMap<HyperedgeId, NodeId>,
    node_edges: BTreeMap<NodeId, HyperedgeId>,
}

impl Incidence {
    pub fn vertex_node(&self, v: VertexId) -> NodeId {
        NodeId(v.0)
    }

    pub fn node_vertex(&self, n: NodeId) -> Option<VertexId> {
        (n.index() < self.vertex_count).then_some(VertexId(n.0))
    }

    pub fn edge_node(&self, e: HyperedgeId) -> Option<NodeId> {
        self.edge_nodes.get(&e).copied()
    }

    pub fn node_edge(&self, n: NodeId) -> Option<HyperedgeId> {
        self.node_edges.get(&n).copied()
    }
}

pub fn incidence_graph(h: &Hypergraph) -> Incidence {
    let mut instance = ElementConnInstance::new();
    for v in h.vertices() {
        instance.add_node(h.name(v), true);
    }
    let mut edge_nodes = BTreeMap::new();
    let mut node_edges = BTreeMap::new();
    for (id, members) in h.hyperedges() {
        let node = instance.add_node(id.to_string(), false);
        for &v in members {
            instance.add_edge(NodeId(v.0), node).expect("valid incidence edge");
        }
        edge_nodes.insert(id, node);
        node_edges.insert(node, id);
    }
    Incidence { instance, vertex_count: h.vertex_count(), edge_nodes, node_edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_hyperedge_is_a_star() {
        let h = Hypergraph::from_names(["a", "b", "c"], [["a", "b", "c"]]).unwrap();
        let inc = incidence_graph(&h);
        let center = inc.edge_node(HyperedgeId(0)).unwrap();
        assert!(!inc.instance.is_terminal(center));
        assert_eq!(inc.instance.degree(center), 3);
        assert_eq!(inc.instance.terminals().len(), 3);
    }

    #[test]
    fn edgeless_gives_isolated_terminals() {
        let h = Hypergraph::with_vertices(["a", "b"]).unwrap();
        let inc = incidence_graph(&h);
        assert_eq!(inc.instance.edge_count(), 0);
        assert_eq!(inc.instance.terminals().len(), 2);
    }

    #[test]
    fn parallel_hyperedges_become_parallel_nodes() {
        let h = Hypergraph::from_names(["a", "b"], [["a", "b"], ["a", "b"]]).unwrap();
        let inc = incidence_graph(&h);
        let n0 = inc.edge_node(HyperedgeId(0)).unwrap();
        let n1 = inc.edge_node(HyperedgeId(1)).unwrap();
        assert_ne!(n0, n1);
        assert_eq!(inc.instance.neighbors(n0), inc.instance.neighbors(n1));
        assert_eq!(inc.node_edge(n1), Some(HyperedgeId(1)));
        assert_eq!(inc.node_vertex(n1), None);
    }
}
