use std::fmt;

use crate::error::{Error, Result};

/// Node of an [`ElementConnInstance`]. Ids are never reused: contraction
/// and removal retire ids instead of renumbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

/// Edge slot of an [`ElementConnInstance`]. Stable under contraction of
/// other edges, so an edge keeps its id in every minor it survives into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An undirected multigraph with a designated terminal set.
///
/// The non-terminals and the edges are the *elements* whose removal is
/// counted by element-connectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementConnInstance {
    labels: Vec<String>,
    terminal: Vec<bool>,
    alive: Vec<bool>,
    edges: Vec<Option<(NodeId, NodeId)>>,
}

impl ElementConnInstance {
    pub fn new() -> Self {
        ElementConnInstance { labels: Vec::new(), terminal: Vec::new(), alive: Vec::new(), edges: Vec::new() }
    }

    pub fn add_node(&mut self, label: impl Into<String>, terminal: bool) -> NodeId {
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(label.into());
        self.terminal.push(terminal);
        self.alive.push(true);
        id
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<EdgeId> {
        self.check_node(a)?;
        self.check_node(b)?;
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(Some((a, b)));
        Ok(id)
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if self.contains_node(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.alive.get(v.index()).copied().unwrap_or(false)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(e.index()), Some(Some(_)))
    }

    /// One past the largest node id ever issued.
    pub fn node_bound(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len() as u32).map(NodeId).filter(|&v| self.alive[v.index()])
    }

    pub fn node_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn terminals(&self) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.terminal[v.index()]).collect()
    }

    pub fn non_terminals(&self) -> Vec<NodeId> {
        self.nodes().filter(|&v| !self.terminal[v.index()]).collect()
    }

    pub fn is_terminal(&self, v: NodeId) -> bool {
        self.terminal.get(v.index()).copied().unwrap_or(false)
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.index()]
    }

    /// Live node with the given label, if any.
    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.nodes().find(|&v| self.labels[v.index()] == label)
    }

    /// Live edges in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, NodeId, NodeId)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|(a, b)| (EdgeId(i as u32), a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(NodeId, NodeId)> {
        self.edges.get(e.index()).copied().flatten().ok_or(Error::MissingEdge(e))
    }

    /// Number of elements (non-terminals plus edges).
    pub fn element_count(&self) -> usize {
        self.non_terminals().len() + self.edge_count()
    }

    pub fn incident_edges(&self, v: NodeId) -> Vec<EdgeId> {
        self.edges().filter(|&(_, a, b)| a == v || b == v).map(|(e, _, _)| e).collect()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.edges().filter(|&(_, a, b)| a == v || b == v).count()
    }

    /// Distinct neighbors of `v`, ascending.
    pub fn neighbors(&self, v: NodeId) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .edges()
            .filter_map(|(_, a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Edges whose endpoints are both non-terminals, ascending by
    /// (smaller endpoint, larger endpoint, edge id).
    pub fn non_terminal_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<(NodeId, NodeId, EdgeId)> = self
            .edges()
            .filter(|&(_, a, b)| !self.is_terminal(a) && !self.is_terminal(b))
            .map(|(e, a, b)| (a.min(b), a.max(b), e))
            .collect();
        out.sort_unstable();
        out.into_iter().map(|(_, _, e)| e).collect()
    }

    pub fn delete_edge(&mut self, e: EdgeId) -> Result<()> {
        if !self.contains_edge(e) {
            return Err(Error::MissingEdge(e));
        }
        self.edges[e.index()] = None;
        Ok(())
    }

    /// Copy with `e` deleted.
    pub fn without_edge(&self, e: EdgeId) -> Result<Self> {
        let mut g = self.clone();
        g.delete_edge(e)?;
        Ok(g)
    }

    /// Contracts edge `e`, merging the larger endpoint into the smaller one.
    /// Every edge between the two endpoints becomes a loop and is
    /// discarded; other parallel edges are kept. Returns the surviving node.
    pub fn contract_edge(&mut self, e: EdgeId) -> Result<NodeId> {
        let (a, b) = self.endpoints(e)?;
        let (keep, gone) = (a.min(b), a.max(b));
        for slot in self.edges.iter_mut() {
            if let Some((x, y)) = *slot {
                let x = if x == gone { keep } else { x };
                let y = if y == gone { keep } else { y };
                *slot = if x == y { None } else { Some((x, y)) };
            }
        }
        self.alive[gone.index()] = false;
        Ok(keep)
    }

    /// Copy with `e` contracted; also returns the surviving node.
    pub fn with_contracted(&self, e: EdgeId) -> Result<(Self, NodeId)> {
        let mut g = self.clone();
        let v = g.contract_edge(e)?;
        Ok((g, v))
    }

    /// Removes an isolated node.
    pub fn remove_node(&mut self, v: NodeId) -> Result<()> {
        self.check_node(v)?;
        if self.degree(v) > 0 {
            return Err(Error::NodeNotIsolated(v));
        }
        self.alive[v.index()] = false;
        Ok(())
    }

    /// True iff `u` and `v` lie in the same component after deleting the
    /// given non-terminals and edges.
    pub fn connected_avoiding(
        &self,
        u: NodeId,
        v: NodeId,
        removed_nodes: &[bool],
        removed_edges: &[bool],
    ) -> bool {
        let n = self.labels.len();
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (e, a, b) in self.edges() {
            if removed_edges.get(e.index()).copied().unwrap_or(false) {
                continue;
            }
            adj[a.index()].push(b);
            adj[b.index()].push(a);
        }
        let blocked = |x: NodeId| removed_nodes.get(x.index()).copied().unwrap_or(false);
        let mut seen = vec![false; n];
        let mut stack = vec![u];
        seen[u.index()] = true;
        while let Some(x) = stack.pop() {
            if x == v {
                return true;
            }
            for &y in &adj[x.index()] {
                if !seen[y.index()] && !blocked(y) {
                    seen[y.index()] = true;
                    stack.push(y);
                }
            }
        }
        false
    }
}

impl Default for ElementConnInstance {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_discards_loops_and_keeps_parallels() {
        let mut g = ElementConnInstance::new();
        let t = g.add_node("t", true);
        let p = g.add_node("p", false);
        let q = g.add_node("q", false);
        let pq = g.add_edge(p, q).unwrap();
        g.add_edge(p, q).unwrap();
        g.add_edge(p, t).unwrap();
        g.add_edge(q, t).unwrap();
        let keep = g.contract_edge(pq).unwrap();
        assert_eq!(keep, p);
        assert!(!g.contains_node(q));
        assert_eq!(g.edge_count(), 2);
        assert!(g.edges().all(|(_, a, b)| (a, b) == (p, t) || (a, b) == (t, p)));
    }

    #[test]
    fn rejects_loops_and_unknown_nodes() {
        let mut g = ElementConnInstance::new();
        let a = g.add_node("a", true);
        assert_eq!(g.add_edge(a, a), Err(Error::SelfLoop(a)));
        assert_eq!(g.add_edge(a, NodeId(3)), Err(Error::UnknownNode(NodeId(3))));
        assert_eq!(g.delete_edge(EdgeId(0)), Err(Error::MissingEdge(EdgeId(0))));
    }

    #[test]
    fn remove_node_requires_isolation() {
        let mut g = ElementConnInstance::new();
        let a = g.add_node("a", true);
        let b = g.add_node("b", false);
        let e = g.add_edge(a, b).unwrap();
        assert_eq!(g.remove_node(b), Err(Error::NodeNotIsolated(b)));
        g.delete_edge(e).unwrap();
        g.remove_node(b).unwrap();
        assert_eq!(g.nodes().collect::<Vec<_>>(), vec![a]);
    }
}
