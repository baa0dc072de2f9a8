//! Networks of entangled links: loading, route selection and path simulation.

mod graph;
mod route;

pub use graph::{
    load_network, parse_network, Edge, EdgeDocument, NetworkDocument, NetworkGraph, ResourceDocument, StateDocument,
    LOAD_NORM_TOLERANCE,
};
pub use route::{
    best_path, choose_path, score_edge, simulate_path, EdgeScore, Metric, PathOutcome, PathSimulation, RouteChoice,
    RouteReport, ScoredEdge,
};
