//! Multi-hypergraphs, the cut function, and the two splitting-off primitives
//! (trim and merge) applied at a distinguished vertex.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a vertex in a [`Hypergraph`]'s interning table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

/// Identifier of one member of the hyperedge multiset.
///
/// Ids are dense at parse time (the `i`-th hyperedge of the input gets id
/// `i`) and survive trims and merges; a merge keeps the `keep` id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HyperedgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl HyperedgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for HyperedgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A multi-hypergraph over named vertices.
///
/// Every hyperedge is stored as a sorted, duplicate-free vertex list of
/// length at least two. Parallel hyperedges are distinct entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: BTreeMap<HyperedgeId, Vec<VertexId>>,
}

/// One side `S` of a cut, with `∅ ⊊ S ⊊ V` checked against the hypergraph
/// it is used with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSide(BTreeSet<VertexId>);

impl CutSide {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        CutSide(vertices.into_iter().collect())
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.0
    }

    /// `V − S` relative to `h`.
    pub fn complement(&self, h: &Hypergraph) -> CutSide {
        CutSide(h.vertices().filter(|v| !self.0.contains(v)).collect())
    }
}

/// A single h-splitting-off step at the split vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum SplitOffOp {
    /// Remove the split vertex from `edge`.
    Trim { edge: HyperedgeId },
    /// Replace `keep` and `absorb` (which meet exactly in the split vertex)
    /// by their union, stored under `keep`.
    Merge { keep: HyperedgeId, absorb: HyperedgeId },
}

impl Hypergraph {
    /// Builds a hypergraph from vertex names and hyperedges given as vertex
    /// names. Hyperedge `i` gets id `i`.
    pub fn from_names<S, E, I>(vertices: impl IntoIterator<Item = S>, hyperedges: E) -> Result<Self>
    where
        S: Into<String>,
        E: IntoIterator<Item = I>,
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let mut h = Hypergraph::with_vertices(vertices)?;
        for (i, edge) in hyperedges.into_iter().enumerate() {
            let mut members = Vec::new();
            for name in edge {
                let name = name.as_ref();
                let v = h
                    .vertex(name)
                    .ok_or_else(|| Error::UnknownVertex(name.to_string()))?;
                if members.contains(&v) {
                    return Err(Error::RepeatedVertexInHyperedge { index: i, vertex: name.to_string() });
                }
                members.push(v);
            }
            h.insert_edge(HyperedgeId(i as u32), members)
                .map_err(|e| match e {
                    Error::HyperedgeTooSmall { size, .. } => Error::HyperedgeTooSmall { index: i, size },
                    other => other,
                })?;
        }
        Ok(h)
    }

    /// An edgeless hypergraph on the given vertex names.
    pub fn with_vertices<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        for name in vertices {
            let name = name.into();
            let id = VertexId(names.len() as u32);
            if index.insert(name.clone(), id).is_some() {
                return Err(Error::DuplicateVertex(name));
            }
            names.push(name);
        }
        Ok(Hypergraph { names, index, edges: BTreeMap::new() })
    }

    /// Builds from raw ids. Vertex lists are canonicalized; hyperedges with
    /// fewer than two distinct members are rejected.
    pub fn from_parts(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (HyperedgeId, Vec<VertexId>)>,
    ) -> Result<Self> {
        let mut h = Hypergraph::with_vertices(names)?;
        for (id, members) in edges {
            h.insert_edge(id, members)?;
        }
        Ok(h)
    }

    fn insert_edge(&mut self, id: HyperedgeId, mut members: Vec<VertexId>) -> Result<()> {
        for &v in &members {
            if v.index() >= self.names.len() {
                return Err(Error::UnknownVertexId(v));
            }
        }
        members.sort_unstable();
        members.dedup();
        if members.len() < 2 {
            return Err(Error::HyperedgeTooSmall { index: id.index(), size: members.len() });
        }
        self.edges.insert(id, members);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len() as u32).map(VertexId)
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.names.len()
    }

    /// Hyperedges in ascending id order.
    pub fn hyperedges(&self) -> impl Iterator<Item = (HyperedgeId, &[VertexId])> + '_ {
        self.edges.iter().map(|(&id, m)| (id, m.as_slice()))
    }

    pub fn hyperedge(&self, id: HyperedgeId) -> Option<&[VertexId]> {
        self.edges.get(&id).map(Vec::as_slice)
    }

    /// Ids of the hyperedges containing `v`, ascending.
    pub fn incident(&self, v: VertexId) -> Vec<HyperedgeId> {
        self.edges
            .iter()
            .filter(|(_, m)| m.binary_search(&v).is_ok())
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.values().filter(|m| m.binary_search(&v).is_ok()).count()
    }

    /// `δ(S)`: the hyperedges with a vertex in `S` and a vertex outside it.
    pub fn delta(&self, side: &CutSide) -> Result<BTreeSet<HyperedgeId>> {
        let inside = side.vertices();
        if inside.is_empty()
            || inside.len() >= self.names.len()
            || inside.iter().any(|&v| !self.contains_vertex(v))
        {
            return Err(Error::InvalidCut);
        }
        Ok(self
            .edges
            .iter()
            .filter(|(_, m)| {
                let ins = m.iter().filter(|v| inside.contains(v)).count();
                ins > 0 && ins < m.len()
            })
            .map(|(&id, _)| id)
            .collect())
    }

    /// Applies one splitting-off step at `s`, returning the new hypergraph.
    ///
    /// A trim that leaves fewer than two vertices drops the hyperedge.
    pub fn apply_op(&self, s: VertexId, op: SplitOffOp) -> Result<Hypergraph> {
        if !self.contains_vertex(s) {
            return Err(Error::UnknownVertexId(s));
        }
        let mut next = self.clone();
        match op {
            SplitOffOp::Trim { edge } => {
                let members = next.edges.get_mut(&edge).ok_or(Error::UnknownHyperedge(edge))?;
                let pos = members
                    .binary_search(&s)
                    .map_err(|_| Error::TrimTargetLacksVertex { edge })?;
                members.remove(pos);
                if members.len() < 2 {
                    next.edges.remove(&edge);
                }
            }
            SplitOffOp::Merge { keep, absorb } => {
                let e = self.edges.get(&keep).ok_or(Error::UnknownHyperedge(keep))?;
                let f = self.edges.get(&absorb).ok_or(Error::UnknownHyperedge(absorb))?;
                let almost_disjoint = keep != absorb
                    && e.binary_search(&s).is_ok()
                    && f.binary_search(&s).is_ok()
                    && e.iter().filter(|v| f.binary_search(v).is_ok()).count() == 1;
                if !almost_disjoint {
                    return Err(Error::NotAlmostDisjoint { keep, absorb });
                }
                let mut union: Vec<VertexId> = e.iter().chain(f.iter()).copied().collect();
                union.sort_unstable();
                union.dedup();
                next.edges.remove(&absorb);
                next.edges.insert(keep, union);
            }
        }
        Ok(next)
    }

    /// Left fold of [`Hypergraph::apply_op`] over `log`.
    pub fn replay(&self, s: VertexId, log: &[SplitOffOp]) -> Result<Hypergraph> {
        let mut current = self.clone();
        for (index, &op) in log.iter().enumerate() {
            current = current
                .apply_op(s, op)
                .map_err(|e| Error::Replay { index, source: Box::new(e) })?;
        }
        Ok(current)
    }

    /// Removes vertex `v`, which must be isolated. Later vertices are
    /// renumbered; hyperedge ids are kept.
    pub fn without_isolated_vertex(&self, v: VertexId) -> Result<Hypergraph> {
        if !self.contains_vertex(v) {
            return Err(Error::UnknownVertexId(v));
        }
        if self.degree(v) > 0 {
            return Err(Error::InvalidParams(format!(
                "vertex `{}` is not isolated",
                self.name(v)
            )));
        }
        let names: Vec<String> = self
            .names
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != v.index())
            .map(|(_, n)| n.clone())
            .collect();
        let shift = |u: VertexId| if u > v { VertexId(u.0 - 1) } else { u };
        let edges = self
            .edges
            .iter()
            .map(|(&id, m)| (id, m.iter().map(|&u| shift(u)).collect()));
        Hypergraph::from_parts(names, edges)
    }

    /// Sorted vertex names and the sorted multiset of hyperedges as sorted
    /// name lists. Two hypergraphs are equal iff their canonical forms are.
    pub fn canonical(&self) -> (Vec<&str>, Vec<Vec<&str>>) {
        let mut names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        names.sort_unstable();
        let mut edges: Vec<Vec<&str>> = self
            .edges
            .values()
            .map(|m| {
                let mut e: Vec<&str> = m.iter().map(|&v| self.name(v)).collect();
                e.sort_unstable();
                e
            })
            .collect();
        edges.sort_unstable();
        (names, edges)
    }
}

/// Id-agnostic equality: same vertex names and the same multiset of
/// hyperedges.
pub fn hypergraph_equal(a: &Hypergraph, b: &Hypergraph) -> bool {
    a.canonical() == b.canonical()
}
