//! Core-node backbones, module density and cumulative evolution series.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::roles::{classify_roles, Role, RoleConfig, RoleMap};
use crate::tc::{compute_tc, TcConfig};

#[derive(Clone, Debug)]
pub struct BackboneReport {
    /// Subgraph induced on the core nodes.
    pub backbone: Graph,
    /// Core node indices in the source graph.
    pub cores: Vec<usize>,
    /// Backbone component sizes, largest first.
    pub component_sizes: Vec<usize>,
    /// Cores without any backbone edge.
    pub isolated_cores: Vec<NodeId>,
    pub warnings: Vec<String>,
}

impl BackboneReport {
    pub fn core_count(&self) -> usize {
        self.cores.len()
    }
}

pub fn extract_backbone(g: &Graph, roles: &RoleMap) -> BackboneReport {
    let cores = roles.cores();
    let (backbone, _) = g.induced_subgraph_ix(&cores);
    let component_sizes = backbone.connected_components().iter().map(Vec::len).collect();
    let isolated_cores = (0..backbone.node_count())
        .filter(|&v| backbone.incident(v).is_empty())
        .map(|v| backbone.node_id(v).clone())
        .collect();
    let mut warnings = Vec::new();
    if cores.is_empty() {
        warnings.push("no core nodes; backbone is empty".to_string());
    }
    BackboneReport {
        backbone,
        cores,
        component_sizes,
        isolated_cores,
        warnings,
    }
}

/// Edges per node; zero for an empty graph.
pub fn cooperation_density(module: &Graph) -> f64 {
    if module.node_count() == 0 {
        0.0
    } else {
        module.edge_count() as f64 / module.node_count() as f64
    }
}

/// Density range `[(n-1)/n, n-1]` of a connected digraph with at most one
/// arc per ordered pair.
pub fn density_bounds(n: usize) -> (f64, f64) {
    if n <= 1 {
        (0.0, 0.0)
    } else {
        ((n - 1) as f64 / n as f64, (n - 1) as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SnapshotReport {
    pub label: String,
    pub nodes: usize,
    pub edges: usize,
    /// Size of the largest connected component.
    pub module_nodes: usize,
    pub module_edges: usize,
    /// Topological centers of the largest component.
    pub centers: Vec<NodeId>,
    pub iterations: usize,
    pub converged: bool,
    pub core_count: usize,
    pub backbone_edges: usize,
    pub backbone_components: usize,
    #[serde(skip)]
    pub roles: BTreeMap<NodeId, Role>,
    #[serde(skip)]
    pub largest: BTreeSet<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoleTransition {
    pub node: NodeId,
    pub from: Role,
    pub to: Role,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SnapshotDelta {
    pub label: String,
    pub new_nodes: Vec<NodeId>,
    /// Nodes that joined the largest component.
    pub joined_largest: Vec<NodeId>,
    pub role_transitions: Vec<RoleTransition>,
    pub centers_changed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolutionSeries {
    pub snapshots: Vec<SnapshotReport>,
    /// One entry per snapshot after the first.
    pub deltas: Vec<SnapshotDelta>,
}

fn edge_multiset(g: &Graph) -> BTreeMap<(NodeId, NodeId), usize> {
    let mut out = BTreeMap::new();
    for e in g.edges() {
        let (mut u, mut v) = (g.node_id(e.source).clone(), g.node_id(e.target).clone());
        if !g.is_directed() && v < u {
            std::mem::swap(&mut u, &mut v);
        }
        *out.entry((u, v)).or_insert(0) += 1;
    }
    out
}

fn check_cumulative(snapshots: &[(String, Graph)]) -> Result<()> {
    for pair in snapshots.windows(2) {
        let ((_, prev), (label, next)) = (&pair[0], &pair[1]);
        if prev.is_directed() != next.is_directed() {
            return Err(Error::NonCumulative {
                snapshot: label.clone(),
                reason: "directedness differs from the previous snapshot".into(),
            });
        }
        if let Some(v) = prev.nodes().iter().find(|v| next.index_of(v).is_none()) {
            return Err(Error::NonCumulative {
                snapshot: label.clone(),
                reason: format!("node `{v}` disappeared"),
            });
        }
        let next_edges = edge_multiset(next);
        for ((u, v), c) in edge_multiset(prev) {
            let have = next_edges.get(&(u.clone(), v.clone())).copied().unwrap_or(0);
            if have < c {
                return Err(Error::NonCumulative {
                    snapshot: label.clone(),
                    reason: format!("edge `{u}`-`{v}` occurs {have} times, previously {c}"),
                });
            }
        }
    }
    Ok(())
}

fn analyze(label: &str, g: &Graph, role_cfg: &RoleConfig, tc_cfg: &TcConfig) -> Result<SnapshotReport> {
    let tc = compute_tc(g, tc_cfg)?;
    let roles = classify_roles(g, &tc, role_cfg)?;
    let bb = extract_backbone(g, &roles);
    let comps = g.connected_components();
    let largest_ix = comps.first().cloned().unwrap_or_default();
    let centers: BTreeSet<usize> = tc.centers(role_cfg.tie_eps).into_iter().collect();
    let module_edges = g
        .edges()
        .iter()
        .filter(|e| largest_ix.binary_search(&e.source).is_ok())
        .count();
    Ok(SnapshotReport {
        label: label.to_string(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        module_nodes: largest_ix.len(),
        module_edges,
        centers: largest_ix
            .iter()
            .filter(|v| centers.contains(v))
            .map(|&v| g.node_id(v).clone())
            .collect(),
        iterations: tc.iterations(),
        converged: tc.converged,
        core_count: bb.core_count(),
        backbone_edges: bb.backbone.edge_count(),
        backbone_components: bb.component_sizes.len(),
        roles: g.nodes().iter().cloned().zip(roles.roles.iter().copied()).collect(),
        largest: largest_ix.iter().map(|&v| g.node_id(v).clone()).collect(),
    })
}

fn delta(prev: &SnapshotReport, next: &SnapshotReport) -> SnapshotDelta {
    SnapshotDelta {
        label: next.label.clone(),
        new_nodes: next
            .roles
            .keys()
            .filter(|v| !prev.roles.contains_key(*v))
            .cloned()
            .collect(),
        joined_largest: next.largest.difference(&prev.largest).cloned().collect(),
        role_transitions: next
            .roles
            .iter()
            .filter_map(|(v, &to)| {
                let &from = prev.roles.get(v)?;
                (from != to).then(|| RoleTransition {
                    node: v.clone(),
                    from,
                    to,
                })
            })
            .collect(),
        centers_changed: prev.centers != next.centers,
    }
}

/// Analyze each cumulative snapshot from scratch and report what changed
/// between consecutive ones.
pub fn evolution_series(
    snapshots: &[(String, Graph)],
    role_cfg: &RoleConfig,
    tc_cfg: &TcConfig,
) -> Result<EvolutionSeries> {
    role_cfg.validate()?;
    tc_cfg.validate()?;
    check_cumulative(snapshots)?;
    let reports = snapshots
        .par_iter()
        .map(|(label, g)| analyze(label, g, role_cfg, tc_cfg))
        .collect::<Result<Vec<_>>>()?;
    let deltas = reports.windows(2).map(|w| delta(&w[0], &w[1])).collect();
    Ok(EvolutionSeries {
        snapshots: reports,
        deltas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture_tree16, generate, Family, GeneratorSpec};
    use crate::graph::{build_graph, GraphBuilder};

    fn roles_of(g: &Graph, threshold: f64) -> RoleMap {
        let tc = compute_tc(g, &TcConfig::default()).unwrap();
        classify_roles(g, &tc, &RoleConfig::with_threshold(threshold)).unwrap()
    }

    #[test]
    fn tree_backbone_has_no_edges() {
        let g = fixture_tree16();
        let bb = extract_backbone(&g, &roles_of(&g, 0.5));
        let ids: Vec<&str> = bb.backbone.nodes().iter().map(NodeId::as_str).collect();
        assert_eq!(ids, ["1", "2", "3"]);
        assert_eq!(bb.backbone.edge_count(), 0);
        assert_eq!(bb.component_sizes, vec![1, 1, 1]);
        assert_eq!(bb.isolated_cores.len(), 3);
    }

    #[test]
    fn backbone_edges_join_cores() {
        let g = generate(&GeneratorSpec::seeded(Family::ErRandom { n: 60, p: 0.08 }, 4)).unwrap();
        let roles = roles_of(&g, 0.5);
        let bb = extract_backbone(&g, &roles);
        let expected = g
            .edges()
            .iter()
            .filter(|e| roles.is_core(e.source) && roles.is_core(e.target))
            .count();
        assert_eq!(bb.backbone.edge_count(), expected);
        assert_eq!(bb.backbone.node_count(), roles.cores().len());
    }

    #[test]
    fn no_cores_gives_empty_backbone() {
        let g = generate(&GeneratorSpec::new(Family::Ring { n: 6 })).unwrap();
        let bb = extract_backbone(&g, &roles_of(&g, 0.5));
        assert_eq!(bb.backbone.node_count(), 0);
        assert_eq!(bb.warnings.len(), 1);
    }

    #[test]
    fn density_examples() {
        let mut b = GraphBuilder::new(true);
        for i in 0..99 {
            b.add_node(i);
        }
        for i in 0..174 {
            b.add_edge(i % 99, (i + 1) % 99);
        }
        let g = b.build().unwrap();
        assert!((cooperation_density(&g) - 174.0 / 99.0).abs() < 1e-15);
        assert_eq!(cooperation_density(&build_graph([1], Vec::<(i32, i32)>::new(), false).unwrap()), 0.0);
        assert_eq!(density_bounds(2), (0.5, 1.0));
        assert_eq!(density_bounds(1), (0.0, 0.0));
        assert_eq!(density_bounds(10), (0.9, 9.0));
    }

    fn snapshot(label: &str, edges: &[(i32, i32)]) -> (String, Graph) {
        let mut b = GraphBuilder::new(false);
        for &(u, v) in edges {
            b.add_edge(u, v);
        }
        (label.to_string(), b.build().unwrap())
    }

    #[test]
    fn new_hub_moves_center() {
        let y1 = [(1, 2), (2, 3)];
        let y2: Vec<(i32, i32)> = y1.iter().copied().chain((4..9).map(|v| (3, v))).collect();
        let y3: Vec<(i32, i32)> = y2.iter().copied().chain([(8, 9)]).collect();
        let snaps = vec![snapshot("2001", &y1), snapshot("2002", &y2), snapshot("2003", &y3)];
        let s = evolution_series(&snaps, &RoleConfig::default(), &TcConfig::default()).unwrap();
        assert_eq!(s.snapshots[0].centers, vec![NodeId::from(2)]);
        assert_eq!(s.snapshots[1].centers, vec![NodeId::from(3)]);
        assert!(s.deltas[0].centers_changed);
        assert_eq!(s.deltas[0].new_nodes.len(), 5);
        assert!(s.deltas[0]
            .role_transitions
            .iter()
            .any(|t| t.node == NodeId::from(3) && t.to == Role::Core));
        assert_eq!(s.deltas[1].new_nodes, vec![NodeId::from(9)]);
        for w in s.snapshots.windows(2) {
            assert!(w[0].nodes <= w[1].nodes && w[0].edges <= w[1].edges);
        }
    }

    #[test]
    fn identical_snapshots_repeat() {
        let snaps = vec![snapshot("a", &[(1, 2), (2, 3)]), snapshot("b", &[(1, 2), (2, 3)])];
        let s = evolution_series(&snaps, &RoleConfig::default(), &TcConfig::default()).unwrap();
        let (a, b) = (&s.snapshots[0], &s.snapshots[1]);
        assert_eq!((a.nodes, a.edges, &a.centers, &a.roles), (b.nodes, b.edges, &b.centers, &b.roles));
        assert!(s.deltas[0].role_transitions.is_empty());
        assert!(!s.deltas[0].centers_changed);
    }

    #[test]
    fn shrinking_snapshot_is_rejected() {
        let snaps = vec![snapshot("a", &[(1, 2), (2, 3)]), snapshot("b", &[(1, 2)])];
        match evolution_series(&snaps, &RoleConfig::default(), &TcConfig::default()) {
            Err(Error::NonCumulative { snapshot, .. }) => assert_eq!(snapshot, "b"),
            other => panic!("unexpected {other:?}"),
        }
        let snaps = vec![snapshot("a", &[(1, 2), (1, 2)]), snapshot("b", &[(1, 2), (2, 3)])];
        assert!(evolution_series(&snaps, &RoleConfig::default(), &TcConfig::default()).is_err());
    }
}
