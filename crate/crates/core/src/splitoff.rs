//! Complete, connectivity-preserving splitting-off at a vertex `s`.
//!
//! The construction works on the incidence graph `G₀` of `H`:
//!
//! 1. `G₁`: `s` is replaced by a clique on fresh non-terminals
//!    `s₁ … s_d`, one per hyperedge through `s`, each `eᵢ` attached to `sᵢ`.
//! 2. `G₂`: every clique edge is reduced (deleted or contracted) while all
//!    terminal-pair element-connectivities stay fixed. The surviving clique
//!    nodes form `S₂`.
//! 3. `G₃`: as many edges at `S₂` as possible are deleted, again keeping
//!    the table.
//! 4. `G₄`: every `S₂` node is contracted with all of its neighbors.
//!
//! Every non-terminal of `G₄` is then a hyperedge of `H*`. The same result
//! is reached from `H` by trims and merges at `s`, which is the returned
//! operation log.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::flow::{conn_table_hyper_with, table_over, ConnTable, EdgeId, ElementConnInstance, NodeId};
use crate::hypergraph::{hypergraph_equal, HyperedgeId, Hypergraph, SplitOffOp, VertexId};
use crate::incidence::incidence_graph;
use crate::par::Exec;
use crate::reduction::{maximal_preserving_deletions_with, reduce_matching, MinorTrace};

/// Above this many terminals the per-stage tables are skipped unless
/// certification is forced on.
pub const AUTO_CERTIFY_MAX_TERMINALS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Certify {
    /// On for instances with at most [`AUTO_CERTIFY_MAX_TERMINALS`] terminals.
    #[default]
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SplitOptions {
    pub certify: Certify,
    pub exec: Exec,
}

impl SplitOptions {
    fn certify_for(&self, terminals: usize) -> bool {
        match self.certify {
            Certify::On => true,
            Certify::Off => false,
            Certify::Auto => terminals <= AUTO_CERTIFY_MAX_TERMINALS,
        }
    }
}

/// `G₁`: the incidence graph with `s` replaced by a clique gadget.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub graph: ElementConnInstance,
    /// `S₁`, in the order of the hyperedges through `s`.
    pub clique: Vec<NodeId>,
    /// `(eᵢ, node of eᵢ, sᵢ)` for each hyperedge through `s`, ascending.
    pub attachments: Vec<(HyperedgeId, NodeId, NodeId)>,
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub graph: ElementConnInstance,
    /// Terminal-pair table over `V ∖ {s}`; recorded only when certifying.
    pub table: Option<ConnTable<NodeId>>,
}

/// Snapshots `G₀ … G₄` and the bookkeeping the operation log is read from.
#[derive(Debug, Clone)]
pub struct StagePipeline {
    pub split_vertex: VertexId,
    pub vertex_names: Vec<String>,
    pub stages: [Stage; 5],
    pub gadget: GadgetInstance,
    /// Steps taken on the clique edges going from `G₁` to `G₂`.
    pub clique_trace: MinorTrace,
    /// `S₂`, ascending.
    pub s2: Vec<NodeId>,
    /// Edges at `S₂` deleted going from `G₂` to `G₃`.
    pub deleted: Vec<EdgeId>,
    /// `F_a` for each `a ∈ S₂` (empty when `a` lost all its edges), ascending.
    pub attached: BTreeMap<NodeId, Vec<HyperedgeId>>,
    /// `F₀`: hyperedges through `s` whose node touches no `S₂` node in `G₃`.
    pub unattached: Vec<HyperedgeId>,
    node_edges: BTreeMap<NodeId, HyperedgeId>,
}

impl StagePipeline {
    pub fn g0(&self) -> &ElementConnInstance {
        &self.stages[0].graph
    }

    pub fn g4(&self) -> &ElementConnInstance {
        &self.stages[4].graph
    }

    /// Hyperedge of `H` that a hyperedge node of some stage stands for.
    pub fn node_hyperedge(&self, n: NodeId) -> Option<HyperedgeId> {
        self.node_edges.get(&n).copied()
    }

    /// Whether every recorded stage table is identical.
    pub fn tables_agree(&self) -> bool {
        let tables: Vec<&ConnTable<NodeId>> = self.stages.iter().filter_map(|s| s.table.as_ref()).collect();
        tables.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// `λ_H` over pairs of `V ∖ {s}`.
    pub before: ConnTable<VertexId>,
    /// `λ_{H*}` over the same pairs.
    pub after: ConnTable<VertexId>,
}

impl Certificate {
    pub fn pairs_checked(&self) -> usize {
        self.before.len()
    }

    pub fn all_equal(&self) -> bool {
        self.before == self.after
    }
}

#[derive(Debug, Clone)]
pub struct SplitOffResult {
    /// `H*`, with `s` kept as an isolated vertex.
    pub h_star: Hypergraph,
    pub log: Vec<SplitOffOp>,
    pub certificate: Certificate,
    /// Present when the run was certified.
    pub pipeline: Option<StagePipeline>,
}

fn check_vertex(h: &Hypergraph, s: VertexId) -> Result<()> {
    if h.contains_vertex(s) {
        Ok(())
    } else {
        Err(Error::UnknownVertexId(s))
    }
}

/// Builds `G₁` from `H`.
pub fn build_gadget(h: &Hypergraph, s: VertexId) -> Result<GadgetInstance> {
    check_vertex(h, s)?;
    let inc = incidence_graph(h);
    gadget_from(h, s, &inc.instance, |e| inc.edge_node(e).expect("hyperedge node"))
}

fn gadget_from(
    h: &Hypergraph,
    s: VertexId,
    g0: &ElementConnInstance,
    edge_node: impl Fn(HyperedgeId) -> NodeId,
) -> Result<GadgetInstance> {
    let s_node = NodeId(s.0);
    let mut graph = g0.clone();
    let mut clique = Vec::new();
    let mut attachments = Vec::new();
    for (i, e) in h.incident(s).into_iter().enumerate() {
        let e_node = edge_node(e);
        let s_i = graph.add_node(format!("s{}", i + 1), false);
        let old = graph
            .edges()
            .find(|&(_, a, b)| (a, b) == (e_node, s_node) || (a, b) == (s_node, e_node))
            .map(|(id, _, _)| id)
            .ok_or_else(|| Error::internal(format!("incidence edge {e}-{s} missing")))?;
        graph.delete_edge(old)?;
        graph.add_edge(e_node, s_i)?;
        clique.push(s_i);
        attachments.push((e, e_node, s_i));
    }
    for (i, &a) in clique.iter().enumerate() {
        for &b in &clique[i + 1..] {
            graph.add_edge(a, b)?;
        }
    }
    graph.remove_node(s_node)?;
    Ok(GadgetInstance { graph, clique, attachments })
}

fn ensure_table(stage: &str, got: &ConnTable<NodeId>, want: &ConnTable<NodeId>) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(Error::internal(format!(
            "{stage}: element-connectivity changed on pairs {:?}",
            got.mismatches(want)
        )))
    }
}

pub fn run_pipeline(h: &Hypergraph, s: VertexId) -> Result<StagePipeline> {
    run_pipeline_with(h, s, SplitOptions::default())
}

pub fn run_pipeline_with(h: &Hypergraph, s: VertexId, opts: SplitOptions) -> Result<StagePipeline> {
    check_vertex(h, s)?;
    let exec = opts.exec;
    let inc = incidence_graph(h);
    let g0 = inc.instance.clone();
    let kept: Vec<NodeId> = h.vertices().filter(|&v| v != s).map(|v| inc.vertex_node(v)).collect();
    let certify = opts.certify_for(kept.len());
    let table = |g: &ElementConnInstance| certify.then(|| table_over(g, &kept, exec));

    let table0 = table(&g0);

    let gadget = gadget_from(h, s, &g0, |e| inc.edge_node(e).expect("hyperedge node"))?;
    let g1 = gadget.graph.clone();
    let table1 = table(&g1);
    if let (Some(t0), Some(t1)) = (&table0, &table1) {
        ensure_table("clique gadget", t1, t0)?;
    }

    let clique: BTreeSet<NodeId> = gadget.clique.iter().copied().collect();
    let (g2, clique_trace) = reduce_matching(&g1, |_, a, b| clique.contains(&a) && clique.contains(&b), exec)?;
    let s2: Vec<NodeId> = gadget.clique.iter().copied().filter(|&a| g2.contains_node(a)).collect();
    let table2 = table(&g2);
    if let (Some(t0), Some(t2)) = (&table0, &table2) {
        ensure_table("clique reduction", t2, t0)?;
    }

    // Each hyperedge node hangs off exactly one S₂ node in G₂.
    for &(e, e_node, _) in &gadget.attachments {
        let hits = g2.neighbors(e_node).into_iter().filter(|x| clique.contains(x)).count();
        if hits != 1 {
            return Err(Error::internal(format!("hyperedge {e} touches {hits} gadget nodes after reduction")));
        }
    }

    let candidates: Vec<EdgeId> = s2.iter().flat_map(|&a| g2.incident_edges(a)).collect();
    let (g3, deleted) = maximal_preserving_deletions_with(&g2, &candidates, exec)?;
    let table3 = table(&g3);
    if let (Some(t0), Some(t3)) = (&table0, &table3) {
        ensure_table("deletions at S2", t3, t0)?;
    }

    let mut attached = BTreeMap::new();
    let mut touched = BTreeSet::new();
    for &a in &s2 {
        let mut members = Vec::new();
        for x in g3.neighbors(a) {
            let e = inc
                .node_edge(x)
                .ok_or_else(|| Error::internal(format!("gadget node {a} adjacent to non-hyperedge node {x}")))?;
            members.push(e);
            touched.insert(e);
        }
        members.sort_unstable();
        attached.insert(a, members);
    }
    let unattached: Vec<HyperedgeId> =
        gadget.attachments.iter().map(|&(e, _, _)| e).filter(|e| !touched.contains(e)).collect();

    let mut g4 = g3.clone();
    for &a in &s2 {
        if attached[&a].is_empty() {
            g4.remove_node(a)?;
            continue;
        }
        let mut order: Vec<(NodeId, NodeId, EdgeId)> = g3
            .incident_edges(a)
            .into_iter()
            .map(|e| {
                let (x, y) = g3.endpoints(e).expect("live edge");
                (x.min(y), x.max(y), e)
            })
            .collect();
        order.sort_unstable();
        for (_, _, e) in order {
            g4.contract_edge(e)?;
            if let Some(t0) = &table0 {
                ensure_table("contraction at S2", &table_over(&g4, &kept, exec), t0)?;
            }
        }
    }
    if let Some(e) = g4.non_terminal_edges().first() {
        return Err(Error::internal(format!("edge {e} joins two non-terminals after the final contractions")));
    }
    let table4 = table(&g4);
    if let (Some(t0), Some(t4)) = (&table0, &table4) {
        ensure_table("final contraction", t4, t0)?;
    }

    let node_edges = h.hyperedges().map(|(e, _)| (inc.edge_node(e).expect("hyperedge node"), e)).collect();
    Ok(StagePipeline {
        split_vertex: s,
        vertex_names: h.names().to_vec(),
        stages: [
            Stage { graph: g0, table: table0 },
            Stage { graph: g1, table: table1 },
            Stage { graph: g2, table: table2 },
            Stage { graph: g3, table: table3 },
            Stage { graph: g4, table: table4 },
        ],
        gadget,
        clique_trace,
        s2,
        deleted,
        attached,
        unattached,
        node_edges,
    })
}

/// Reads `H*` off `G₄`: one hyperedge per non-terminal, over its terminal
/// neighbors. Neighbor sets of size one are dropped; `s` stays as an
/// isolated vertex.
pub fn extract_h_star(p: &StagePipeline) -> Result<Hypergraph> {
    let g4 = p.g4();
    let mut edges = Vec::new();
    for x in g4.non_terminals() {
        let id = p
            .node_hyperedge(x)
            .ok_or_else(|| Error::internal(format!("non-terminal {x} of the final graph is not a hyperedge node")))?;
        let mut members = Vec::new();
        for y in g4.neighbors(x) {
            if !g4.is_terminal(y) {
                return Err(Error::internal(format!("non-terminals {x} and {y} are adjacent in the final graph")));
            }
            members.push(VertexId(y.0));
        }
        if members.len() >= 2 {
            edges.push((id, members));
        }
    }
    Hypergraph::from_parts(p.vertex_names.clone(), edges)
}

/// The trims and merges at `s` that turn `H` into `H*`. Each operation is
/// applied while it is emitted; a merge of hyperedges that share more
/// than `s` is reported as an internal error.
pub fn extract_op_log(p: &StagePipeline, h: &Hypergraph, s: VertexId) -> Result<Vec<SplitOffOp>> {
    let mut log = Vec::new();
    let mut current = h.clone();
    let mut push = |op: SplitOffOp, current: &mut Hypergraph| -> Result<()> {
        *current = current.apply_op(s, op).map_err(|e| match e {
            Error::NotAlmostDisjoint { keep, absorb } => Error::internal(format!(
                "hyperedges {keep} and {absorb} share a gadget node but meet outside the split vertex"
            )),
            other => Error::internal(format!("extracted operation {op:?} is invalid: {other}")),
        })?;
        log.push(op);
        Ok(())
    };
    for &e in &p.unattached {
        push(SplitOffOp::Trim { edge: e }, &mut current)?;
    }
    for members in p.attached.values() {
        let Some((&first, rest)) = members.split_first() else { continue };
        for &other in rest {
            push(SplitOffOp::Merge { keep: first, absorb: other }, &mut current)?;
        }
        push(SplitOffOp::Trim { edge: first }, &mut current)?;
    }
    Ok(log)
}

pub fn complete_split_off(h: &Hypergraph, s: VertexId) -> Result<SplitOffResult> {
    complete_split_off_with(h, s, SplitOptions::default())
}

/// Runs the construction and certifies the result: `λ` over `V ∖ {s}` is
/// unchanged, `s` ends isolated, and replaying the log on `H` gives `H*`.
pub fn complete_split_off_with(h: &Hypergraph, s: VertexId, opts: SplitOptions) -> Result<SplitOffResult> {
    let pipeline = run_pipeline_with(h, s, opts)?;
    let h_star = extract_h_star(&pipeline)?;
    let log = extract_op_log(&pipeline, h, s)?;

    if h_star.degree(s) != 0 {
        return Err(Error::internal("split vertex still has incident hyperedges"));
    }
    let replayed = h.replay(s, &log)?;
    if !hypergraph_equal(&replayed, &h_star) {
        return Err(Error::internal("replaying the operation log does not reproduce H*"));
    }

    let keep = |v: VertexId| v != s;
    let certificate = Certificate {
        before: conn_table_hyper_with(h, opts.exec).restrict(keep),
        after: conn_table_hyper_with(&h_star, opts.exec).restrict(keep),
    };
    if !certificate.all_equal() {
        return Err(Error::internal(format!(
            "hyperedge-connectivity changed on pairs {:?}",
            certificate.before.mismatches(&certificate.after)
        )));
    }
    let certified = pipeline.stages[0].table.is_some();
    Ok(SplitOffResult { h_star, log, certificate, pipeline: certified.then_some(pipeline) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(vertices: &[&str], edges: &[&[&str]]) -> Hypergraph {
        Hypergraph::from_names(vertices.iter().copied(), edges.iter().map(|e| e.iter().copied())).unwrap()
    }

    fn certified() -> SplitOptions {
        SplitOptions { certify: Certify::On, exec: Exec::Sequential }
    }

    #[test]
    fn gadget_shapes() {
        let h = hg(&["s", "a", "b"], &[&["a", "b"]]);
        let g = build_gadget(&h, VertexId(0)).unwrap();
        assert!(g.clique.is_empty());
        assert!(!g.graph.contains_node(NodeId(0)));
        assert_eq!(g.graph.edge_count(), 2);

        let h = hg(&["s", "a", "b"], &[&["s", "a", "b"]]);
        let g = build_gadget(&h, VertexId(0)).unwrap();
        assert_eq!(g.clique.len(), 1);
        assert!(g.graph.non_terminal_edges().iter().all(|&e| {
            let (x, y) = g.graph.endpoints(e).unwrap();
            !(g.clique.contains(&x) && g.clique.contains(&y))
        }));

        let h = hg(
            &["s", "a", "b", "c", "d", "e"],
            &[&["s", "a"], &["s", "b"], &["s", "c"], &["s", "d"], &["s", "e", "a"]],
        );
        let g = build_gadget(&h, VertexId(0)).unwrap();
        assert_eq!(g.clique.len(), 5);
        let clique_edges = g
            .graph
            .edges()
            .filter(|&(_, x, y)| g.clique.contains(&x) && g.clique.contains(&y))
            .count();
        assert_eq!(clique_edges, 10);
        for &(_, e_node, s_i) in &g.attachments {
            let gadget_nbrs: Vec<NodeId> =
                g.graph.neighbors(e_node).into_iter().filter(|x| g.clique.contains(x)).collect();
            assert_eq!(gadget_nbrs, vec![s_i]);
        }

        assert_eq!(build_gadget(&h, VertexId(17)).unwrap_err(), Error::UnknownVertexId(VertexId(17)));
    }

    #[test]
    fn two_edges_through_s_merge_then_trim() {
        let h = hg(&["s", "a", "b"], &[&["s", "a"], &["s", "b"]]);
        let s = VertexId(0);
        let p = run_pipeline_with(&h, s, certified()).unwrap();
        // deleting s1-s2 would disconnect a from b, so it is contracted
        assert_eq!(p.s2.len(), 1);
        assert!(p.deleted.is_empty());
        assert!(p.unattached.is_empty());
        assert_eq!(p.attached[&p.s2[0]], vec![HyperedgeId(0), HyperedgeId(1)]);
        assert!(p.tables_agree());
        assert_eq!(p.g4().non_terminals().len(), 1);

        let h_star = extract_h_star(&p).unwrap();
        assert!(hypergraph_equal(&h_star, &hg(&["s", "a", "b"], &[&["a", "b"]])));
        let log = extract_op_log(&p, &h, s).unwrap();
        assert_eq!(
            log,
            vec![
                SplitOffOp::Merge { keep: HyperedgeId(0), absorb: HyperedgeId(1) },
                SplitOffOp::Trim { edge: HyperedgeId(0) },
            ]
        );

        let r = complete_split_off(&h, s).unwrap();
        assert_eq!(r.certificate.before.get(VertexId(1), VertexId(2)), Some(1));
        assert!(r.certificate.all_equal());
    }

    #[test]
    fn isolated_s_is_a_no_op() {
        let h = hg(&["s", "a", "b", "c"], &[&["a", "b"], &["b", "c", "a"]]);
        let r = complete_split_off_with(&h, VertexId(0), certified()).unwrap();
        assert!(r.log.is_empty());
        assert!(hypergraph_equal(&r.h_star, &h));
        let p = r.pipeline.unwrap();
        assert!(p.s2.is_empty());
        assert_eq!(p.g4().node_count(), p.g0().node_count() - 1);
    }

    #[test]
    fn degree_one_is_a_single_trim() {
        let h = hg(&["s", "a", "b"], &[&["s", "a", "b"], &["a", "b"]]);
        let r = complete_split_off_with(&h, VertexId(0), certified()).unwrap();
        assert_eq!(r.log, vec![SplitOffOp::Trim { edge: HyperedgeId(0) }]);
        assert!(hypergraph_equal(&r.h_star, &hg(&["s", "a", "b"], &[&["a", "b"], &["a", "b"]])));
    }

    #[test]
    fn pendant_edge_trims_to_dropped_singleton() {
        let h = hg(&["s", "a", "b"], &[&["s", "a"], &["a", "b"]]);
        let r = complete_split_off_with(&h, VertexId(0), certified()).unwrap();
        assert_eq!(r.log, vec![SplitOffOp::Trim { edge: HyperedgeId(0) }]);
        assert_eq!(r.h_star.edge_count(), 1);
    }

    #[test]
    fn untouched_edges_survive() {
        let h = hg(
            &["s", "a", "b", "c", "d"],
            &[&["a", "b", "c"], &["s", "a"], &["s", "b", "d"], &["c", "d"], &["s", "c"]],
        );
        let r = complete_split_off_with(&h, VertexId(0), certified()).unwrap();
        for id in [HyperedgeId(0), HyperedgeId(3)] {
            assert_eq!(r.h_star.hyperedge(id), h.hyperedge(id));
        }
        assert!(r.h_star.edge_count() <= h.edge_count());
        assert!(r.pipeline.unwrap().tables_agree());
    }

    #[test]
    fn duplicate_hyperedges_through_s() {
        let h = hg(&["s", "w", "x"], &[&["s", "w"], &["s", "w"], &["w", "x"], &["s", "x"]]);
        let r = complete_split_off_with(&h, VertexId(0), certified()).unwrap();
        assert_eq!(r.h_star.degree(VertexId(0)), 0);
        assert!(r.certificate.all_equal());
    }

    #[test]
    fn certify_off_skips_tables_but_still_certifies_the_result() {
        let h = hg(&["s", "a", "b", "c"], &[&["s", "a"], &["s", "b"], &["s", "c"]]);
        let opts = SplitOptions { certify: Certify::Off, exec: Exec::Parallel };
        let r = complete_split_off_with(&h, VertexId(0), opts).unwrap();
        assert!(r.pipeline.is_none());
        assert_eq!(r.certificate.pairs_checked(), 3);
        assert!(r.certificate.all_equal());
    }
}
