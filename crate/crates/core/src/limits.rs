use serde::{Deserialize, Serialize};

/// Size bounds for the exponential deciders and oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Vertices accepted by the exhaustive cut-admissibility decider.
    pub ca_max_vertices: usize,
    /// Edge instances of `G + F` accepted by the orientation-admissibility decider.
    pub oa_max_edges: usize,
    pub maxcut_max_vertices: usize,
    /// Edge instances accepted by the orientation-enumerating oracles.
    pub orientation_max_edges: usize,
    pub pairing_max_vertices: usize,
    pub pairing_max_odd: usize,
    /// Largest grid that gets the exhaustive cut scan.
    pub grid_exhaustive_max_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ca_max_vertices: 22,
            oa_max_edges: 18,
            maxcut_max_vertices: 20,
            orientation_max_edges: 20,
            pairing_max_vertices: 12,
            pairing_max_odd: 8,
            grid_exhaustive_max_vertices: 16,
        }
    }
}
