//! Directed integral flow networks and Dinic's blocking-flow max-flow.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    cap: u64,
}

/// A directed network with nonnegative integer capacities.
///
/// Arcs are stored in pairs: arc `2k` is the `k`-th arc added, arc `2k+1`
/// its residual twin.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    source: usize,
    sink: usize,
}

/// Result of [`FlowNetwork::solve`]: the flow value and the flow on each
/// arc, indexed by the handle returned from [`FlowNetwork::add_arc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSolution {
    pub value: u64,
    pub arc_flow: Vec<u64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); nodes], arcs: Vec::new(), source, sink }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Adds an arc and returns its handle.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let handle = self.arcs.len() / 2;
        self.adj[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
        handle
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len() / 2
    }

    /// `(from, to, capacity)` of the arc with the given handle.
    pub fn arc(&self, handle: usize) -> (usize, usize, u64) {
        let fwd = self.arcs[2 * handle];
        let back = self.arcs[2 * handle + 1];
        (back.to, fwd.to, fwd.cap)
    }

    pub fn max_flow(&self) -> Result<u64> {
        Ok(self.solve()?.value)
    }

    pub fn solve(&self) -> Result<FlowSolution> {
        if self.source == self.sink {
            return Err(Error::SameEndpoints);
        }
        let n = self.adj.len();
        if self.source >= n || self.sink >= n {
            return Err(Error::InvalidParams("source or sink out of range".into()));
        }
        let mut residual: Vec<u64> = self.arcs.iter().map(|a| a.cap).collect();
        let mut level = vec![u32::MAX; n];
        let mut next = vec![0usize; n];
        let mut value = 0u64;
        while self.bfs(&residual, &mut level) {
            next.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(self.source, u64::MAX, &mut residual, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                value += pushed;
            }
        }
        let arc_flow = (0..self.arc_count()).map(|k| residual[2 * k + 1]).collect();
        Ok(FlowSolution { value, arc_flow })
    }

    fn bfs(&self, residual: &[u64], level: &mut [u32]) -> bool {
        level.iter_mut().for_each(|l| *l = u32::MAX);
        level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.arcs[a].to;
                if residual[a] > 0 && level[v] == u32::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level[self.sink] != u32::MAX
    }

    fn dfs(&self, u: usize, limit: u64, residual: &mut [u64], level: &[u32], next: &mut [usize]) -> u64 {
        if u == self.sink {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let a = self.adj[u][next[u]];
            let v = self.arcs[a].to;
            if residual[a] > 0 && level[v] == level[u] + 1 {
                let pushed = self.dfs(v, limit.min(residual[a]), residual, level, next);
                if pushed > 0 {
                    residual[a] -= pushed;
                    residual[a ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }
}
