//! Shared domain types: images, ground truth, match graphs and edge sets.

mod dataset;
mod graph;
mod ground_truth;
mod image;

pub use dataset::{image_id_from_path, Dataset, DatasetEntry};
pub use graph::{
    deserialize_graph, edge_set, graph_from_rank1, graph_from_ranked, serialize_graph, Edge,
    EdgeSet, MatchGraph, Node, GRAPH_SCHEMA_VERSION,
};
pub use ground_truth::{load_ground_truth, Cluster, GroundTruth};
pub use image::{ImageRecord, SourceFormat};
