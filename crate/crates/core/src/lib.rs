//! Cut conditions, odd-vertex pairings and well-balanced orientations of
//! multigraphs, with the hardness reductions for deciding admissibility and
//! exhaustive oracles for small instances.

pub mod admissibility;
pub mod connectivity;
pub mod corpus;
pub mod error;
pub mod eulerian;
pub mod flow;
pub mod graph;
pub mod grid;
pub mod io;
pub mod limits;
pub mod oracles;
pub mod reductions;
pub mod suite;

pub use admissibility::{
    attack_orientation, check_cut_certificate, decide_ca, decide_oa, enumerate_pairings, odd_vertices, Attack,
    CaDecision, CertificateCheck, CutViolation, OaDecision, OrientationCounterexample, Pairing,
};
pub use connectivity::{is_well_balanced, lambda_directed, lambda_undirected, r_value, FlowResult, LambdaTable, WellBalance};
pub use error::{Error, Result};
pub use eulerian::{check_ff_condition, eulerian_orientation, extend_to_eulerian, ExtensionOutcome};
pub use graph::{EdgePair, GraphBuilder, MultiGraph, Orientation, VertexId, VertexSet};
pub use grid::{augmented_grid, GridSpec};
pub use io::Document;
pub use limits::Limits;
