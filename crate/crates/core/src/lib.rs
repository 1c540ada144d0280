//! Topological centrality (TC) for graphs and the analyses built on it:
//! node roles, role-based communities, core backbones and research network
//! construction, plus classical centrality measures for comparison.
//!
//! ```
//! use tcnet::{compute_tc, fixture_tree16, TcConfig};
//!
//! let g = fixture_tree16();
//! let tc = compute_tc(&g, &TcConfig::default()).unwrap();
//! assert!(tc.converged);
//! ```

pub mod backbone;
pub mod centrality;
pub mod community;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod research;
pub mod roles;
pub mod tc;

pub use backbone::{
    cooperation_density, density_bounds, evolution_series, extract_backbone, BackboneReport,
    EvolutionSeries,
};
pub use centrality::{
    betweenness_centrality, closeness_centrality, degree_centrality, hits, information_centrality,
    network_efficiency, pagerank, CentralityReport, HitsReport,
};
pub use community::{
    expand_from_core, find_k_communities, local_community_of_node, local_community_of_set,
    merge_communities, AdmissionMode, Community, CommunitySet, Expansion,
};
pub use error::{Error, Result};
pub use generators::{
    fixture_center_bridge, fixture_expansion, fixture_tree16, generate, Family, GeneratorSpec,
};
pub use graph::{build_graph, Direction, Edge, EdgeId, Graph, GraphBuilder, NodeId};
pub use roles::{alpha_beta, classify_roles, Role, RoleConfig, RoleMap};
pub use tc::{compute_tc, log_tc, tc_step, topological_centers, TcConfig, TcResult, TcState};
