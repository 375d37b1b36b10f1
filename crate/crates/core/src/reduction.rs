//! Element-connectivity preserving reductions.
//!
//! For an edge between two non-terminals, deleting it or contracting it
//! keeps every terminal-pair `κ′` unchanged (at least one of the two
//! always works). Deletion is tried first; contraction is the fallback and
//! is re-checked, since a failure there means a bug rather than bad input.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{conn_table_elements_with, matches_table, ConnTable, EdgeId, ElementConnInstance, NodeId};
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionAction {
    Deleted,
    Contracted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub edge: EdgeId,
    /// Endpoints at the time of the step, smaller first.
    pub endpoints: (NodeId, NodeId),
    pub action: ReductionAction,
    /// Surviving node of a contraction.
    pub merged_into: Option<NodeId>,
}

/// The steps taken so far and, for every live node, the set of original
/// nodes it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorTrace {
    pub steps: Vec<ReductionStep>,
    pub groups: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl MinorTrace {
    pub fn identity(inst: &ElementConnInstance) -> Self {
        MinorTrace {
            steps: Vec::new(),
            groups: inst.nodes().map(|v| (v, BTreeSet::from([v]))).collect(),
        }
    }

    pub fn record(&mut self, step: ReductionStep) {
        if let Some(keep) = step.merged_into {
            let (a, b) = step.endpoints;
            let gone = if keep == a { b } else { a };
            let absorbed = self.groups.remove(&gone).unwrap_or_default();
            self.groups.entry(keep).or_default().extend(absorbed);
        }
        self.steps.push(step);
    }
}

fn non_terminal_endpoints(inst: &ElementConnInstance, edge: EdgeId) -> Result<(NodeId, NodeId)> {
    let (a, b) = inst.endpoints(edge)?;
    for x in [a, b] {
        if inst.is_terminal(x) {
            return Err(Error::EndpointIsTerminal(x));
        }
    }
    Ok((a.min(b), a.max(b)))
}

/// Whether deleting `edge` leaves every entry of `baseline` unchanged.
pub fn is_deletion_preserving(inst: &ElementConnInstance, edge: EdgeId, baseline: &ConnTable<NodeId>) -> Result<bool> {
    is_deletion_preserving_with(inst, edge, baseline, Exec::default())
}

pub fn is_deletion_preserving_with(
    inst: &ElementConnInstance,
    edge: EdgeId,
    baseline: &ConnTable<NodeId>,
    exec: Exec,
) -> Result<bool> {
    let deleted = inst.without_edge(edge)?;
    Ok(matches_table(&deleted, baseline, exec))
}

/// Deletes or contracts the non-terminal edge `edge`, preferring deletion.
pub fn reduce_edge(
    inst: &ElementConnInstance,
    edge: EdgeId,
    baseline: &ConnTable<NodeId>,
) -> Result<(ElementConnInstance, ReductionStep)> {
    reduce_edge_with(inst, edge, baseline, Exec::default())
}

pub fn reduce_edge_with(
    inst: &ElementConnInstance,
    edge: EdgeId,
    baseline: &ConnTable<NodeId>,
    exec: Exec,
) -> Result<(ElementConnInstance, ReductionStep)> {
    let endpoints = non_terminal_endpoints(inst, edge)?;
    let deleted = inst.without_edge(edge)?;
    if matches_table(&deleted, baseline, exec) {
        let step = ReductionStep { edge, endpoints, action: ReductionAction::Deleted, merged_into: None };
        return Ok((deleted, step));
    }
    let (contracted, keep) = inst.with_contracted(edge)?;
    if !matches_table(&contracted, baseline, exec) {
        return Err(Error::internal(format!(
            "neither deleting nor contracting edge {edge} ({} - {}) preserves element-connectivity",
            endpoints.0, endpoints.1
        )));
    }
    let step = ReductionStep { edge, endpoints, action: ReductionAction::Contracted, merged_into: Some(keep) };
    Ok((contracted, step))
}

/// Reduces every edge between two non-terminals until the non-terminals
/// form a stable set. The terminal-pair table is unchanged.
pub fn reduce_to_stable(inst: &ElementConnInstance) -> Result<(ElementConnInstance, MinorTrace)> {
    reduce_to_stable_with(inst, Exec::default())
}

pub fn reduce_to_stable_with(inst: &ElementConnInstance, exec: Exec) -> Result<(ElementConnInstance, MinorTrace)> {
    reduce_matching(inst, |_, _, _| true, exec)
}

/// Repeatedly reduces the first non-terminal edge (in
/// (smaller endpoint, larger endpoint, edge id) order) accepted by
/// `select`, until none is left.
pub fn reduce_matching<F>(inst: &ElementConnInstance, select: F, exec: Exec) -> Result<(ElementConnInstance, MinorTrace)>
where
    F: Fn(EdgeId, NodeId, NodeId) -> bool,
{
    let baseline = conn_table_elements_with(inst, exec);
    let mut trace = MinorTrace::identity(inst);
    let mut current = inst.clone();
    loop {
        let next = current.non_terminal_edges().into_iter().find(|&e| {
            let (a, b) = current.endpoints(e).expect("live edge");
            select(e, a, b)
        });
        let Some(edge) = next else { break };
        let (reduced, step) = reduce_edge_with(&current, edge, &baseline, exec)?;
        trace.record(step);
        current = reduced;
    }
    Ok((current, trace))
}

/// One greedy pass over `candidates`: each is deleted iff its deletion
/// keeps the table computed at entry. Deletion-preservation only ever
/// becomes harder after other preserving deletions, so the result is
/// maximal. Returns the reduced instance and the deleted edges in order.
pub fn maximal_preserving_deletions(
    inst: &ElementConnInstance,
    candidates: &[EdgeId],
) -> Result<(ElementConnInstance, Vec<EdgeId>)> {
    maximal_preserving_deletions_with(inst, candidates, Exec::default())
}

pub fn maximal_preserving_deletions_with(
    inst: &ElementConnInstance,
    candidates: &[EdgeId],
    exec: Exec,
) -> Result<(ElementConnInstance, Vec<EdgeId>)> {
    let mut order = Vec::with_capacity(candidates.len());
    for &e in candidates {
        let (a, b) = inst.endpoints(e)?;
        order.push((a.min(b), a.max(b), e));
    }
    order.sort_unstable();
    order.dedup();
    let baseline = conn_table_elements_with(inst, exec);
    let mut current = inst.clone();
    let mut deleted = Vec::new();
    for (_, _, e) in order {
        let trial = current.without_edge(e)?;
        if matches_table(&trial, &baseline, exec) {
            current = trial;
            deleted.push(e);
        }
    }
    Ok((current, deleted))
}
