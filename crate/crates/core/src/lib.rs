//! Local edge-connectivity in multi-hypergraphs, element-connectivity in
//! graphs with terminals, and complete connectivity-preserving
//! splitting-off at a hypergraph vertex.
//!
//! The splitting-off routine turns `H` into its incidence graph, replaces
//! the split vertex by a clique of non-terminals, and removes the clique
//! with element-connectivity preserving reductions. The result is read
//! back as a hypergraph `H*` together with a log of trim/merge operations
//! that reproduces `H*` from `H`. See [`splitoff`].

pub mod error;
pub mod flow;
pub mod format;
pub mod hypergraph;
pub mod incidence;
pub mod oracle;
pub mod par;
pub mod reduction;
pub mod splitoff;

pub use error::{Error, Result};
pub use flow::{
    conn_table_elements, conn_table_hyper, element_connectivity, hyperedge_connectivity, ConnTable, EdgeId,
    ElementConnInstance, NodeId,
};
pub use hypergraph::{hypergraph_equal, CutSide, HyperedgeId, Hypergraph, SplitOffOp, VertexId};
pub use incidence::{incidence_graph, Incidence};
pub use par::Exec;
pub use splitoff::{complete_split_off, complete_split_off_with, Certify, SplitOffResult, SplitOptions};
