//! Generic state-and-input observability of structured linear systems.
//!
//! The crate decides whether a structured system `(A, B, C, D)` lets both
//! states and unknown inputs be reconstructed for almost all parameter
//! values, and computes, approximates or bounds minimal dedicated sensor
//! placements that achieve it.

pub mod dm;
pub mod dot;
pub mod error;
pub mod graph;
pub mod instances;
pub mod model;
pub mod place;
pub mod verify;

pub use dm::{dm_decompose, dm_decompose_with, s_edge_report, DmComponent, DmDecomposition, Part, SEdgeReport};
pub use error::{Error, Result};
pub use graph::{
    delta0, max_linking, max_matching, rho, scc_decompose, theta, v_ess, y_reached, BipartiteEdge, BipartiteGraph,
    Matching, SccDecomposition, SystemDigraph, Vertex,
};
pub use model::{
    build_output_pattern, is_dedicated, parse_system, serialize_system, Axis, PlacementResult, Sensor,
    SparsityPattern, Stage, StructuredSystem,
};
pub use verify::{
    check_gsio_both, check_gsio_digraph, check_gsio_dm, check_struct_obs, generic_rank, is_gsio, numeric_rank_oracle,
    DigraphConditions, DmConditions, GsioVerdict, StructObsVerdict,
};
pub use place::{
    auxiliary_system, bounds_dedicated, bounds_direct_measure, exact_min, exact_min_with_cap, l_count,
    min_struct_obs, polycase, polycase_fallback, polycase_selfloop, stage1_placement, stage2_greedy, two_stage,
    BoundsResult, BoundsVariant, MinObsResult, DEFAULT_EXACT_CAP,
};
pub use instances::{
    gen_random, reduce_setcover, setcover_exact, setcover_greedy, RandomSpec, ReductionOutput, Role, RolePattern,
    SetCoverInstance,
};
pub use dot::{decomposition_to_dot, digraph_to_dot};
