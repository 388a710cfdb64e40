//! Computable core of ordered dense graph limit theory.
//!
//! Finite vertex-ordered graphs embed as step orderons (finite column/layer
//! grids over [0,1]^2); the crate computes ordered subgraph densities, cut
//! and ordered cut norms, certified bounds on the cut-shift distance, seeded
//! random graph models, hereditary-property distances and testers, and a
//! weak-regularity refinement loop, all deterministically from explicit
//! seeds.

pub mod csdist;
pub mod density;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod hereditary;
pub mod io;
pub mod norms;
pub mod orderon;
pub mod random;
pub mod regularity;
pub mod rng;
pub mod shift;

pub use csdist::{cs_bounds, cs_lower, cs_upper, CsDistanceBounds};
pub use density::{t_graph, t_montecarlo, t_orderon, DensityMethod, DensityReport};
pub use error::{Error, Result};
pub use graph::{odd_clique, OrderedGraph, PatternGraph, WeightedOrderedGraph, DEFAULT_K_MAX};
pub use hereditary::{
    closure_density_check, dist_threshold, estimate_parameter, extremal_graph,
    is_member_forbidden, is_member_threshold, removal_tester, threshold_family, EstimationReport,
    GraphParameter, MembershipVerdict, PropertySpec, Witness,
};
pub use norms::{
    cut_norm_auto, cut_norm_exact, cut_norm_heuristic, l1_distance, ordered_cut_norm, Exactness,
    NormCertificate, StepKernel,
};
pub use orderon::{common_refinement, embed, embed_weighted, Grid, GridOrderon};
pub use random::{
    gnp, sample_graph, sample_weighted, sbm_consecutive, sbm_consecutive_exact, SbmSpec,
};
pub use regularity::{fk_partition, fk_partition_detailed, stepping, CellPartition, FkReport};
pub use shift::{apply_shift, IntervalExchange, ShiftMap};
