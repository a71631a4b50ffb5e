//! The bipartite flow model behind bin counting and its exact integral bounds.

mod bins;
mod graph;
mod network;

pub use bins::BinSpec;
pub use graph::{build_graph, BinGraph, FlowBounds, LabeledArc};
pub use network::{BoundedNetwork, MaxFlow};
