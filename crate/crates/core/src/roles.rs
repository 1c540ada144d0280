//! Node roles derived from topological centrality.
//!
//! For a node with `N` distinct neighbors, `L` of them with strictly lower
//! TC and `H` with strictly higher TC, `α = L/N` and `β = H/N`. Rules are
//! applied in order:
//!
//! 1. core when `α > core_threshold`
//! 2. margin when `α = 0`
//! 3. bridge when `α = β`
//! 4. mediated otherwise
//!
//! Afterwards every topological center is revisited: if all of its
//! neighbors are core it becomes a bridge, otherwise it is core. Centers
//! that tie with one of their neighbors (K2, rings, even paths) keep their
//! rule-based role unless [`RoleConfig::override_tied_centers`] is set.
//!
//! Two TC values are "equal" when they differ by at most `tie_eps` relative
//! to the larger one; symmetric nodes can differ in the last ulp because of
//! summation order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::tc::{TcResult, DEFAULT_TIE_EPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Core,
    Margin,
    Bridge,
    Mediated,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Core => "core",
            Role::Margin => "margin",
            Role::Bridge => "bridge",
            Role::Mediated => "mediated",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoleConfig {
    pub core_threshold: f64,
    /// Relative tolerance for treating two TC values as equal.
    pub tie_eps: f64,
    /// Apply the center override also to centers with an equal-TC neighbor.
    pub override_tied_centers: bool,
}

impl Default for RoleConfig {
    fn default() -> Self {
        Self {
            core_threshold: 0.5,
            tie_eps: DEFAULT_TIE_EPS,
            override_tied_centers: false,
        }
    }
}

impl RoleConfig {
    pub fn with_threshold(core_threshold: f64) -> Self {
        Self {
            core_threshold,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.5..=1.0).contains(&self.core_threshold) {
            return Err(Error::InvalidConfig(format!(
                "core threshold must be in [0.5, 1], got {}",
                self.core_threshold
            )));
        }
        if !(self.tie_eps >= 0.0 && self.tie_eps < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tie_eps must be in [0, 1), got {}",
                self.tie_eps
            )));
        }
        Ok(())
    }
}

/// Per-node counts behind a role decision.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize)]
pub struct Evidence {
    pub alpha: f64,
    pub beta: f64,
    pub lower: usize,
    pub higher: usize,
    pub neighbors: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoleMap {
    pub roles: Vec<Role>,
    pub evidence: Vec<Evidence>,
    /// Topological centers (node indices) the override pass looked at.
    pub centers: Vec<usize>,
}

impl RoleMap {
    pub fn role(&self, v: usize) -> Role {
        self.roles[v]
    }

    pub fn is_core(&self, v: usize) -> bool {
        self.roles[v] == Role::Core
    }

    /// Node indices carrying `role`, ascending.
    pub fn with_role(&self, role: Role) -> Vec<usize> {
        (0..self.roles.len()).filter(|&v| self.roles[v] == role).collect()
    }

    pub fn cores(&self) -> Vec<usize> {
        self.with_role(Role::Core)
    }
}

/// Compare two TC values with a relative tolerance.
pub fn compare_tc(a: f64, b: f64, tie_eps: f64) -> Ordering {
    if (a - b).abs() <= tie_eps * a.abs().max(b.abs()) {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn evidence_for(g: &Graph, weights: &[f64], v: usize, tie_eps: f64) -> Evidence {
    let nbrs = g.distinct_neighbors(v);
    let (mut lower, mut higher) = (0, 0);
    for &w in &nbrs {
        match compare_tc(weights[w], weights[v], tie_eps) {
            Ordering::Less => lower += 1,
            Ordering::Greater => higher += 1,
            Ordering::Equal => {}
        }
    }
    let n = nbrs.len();
    let frac = |c: usize| if n == 0 { 0.0 } else { c as f64 / n as f64 };
    Evidence {
        alpha: frac(lower),
        beta: frac(higher),
        lower,
        higher,
        neighbors: n,
    }
}

/// `(α, β)` for node `v`, or `None` when `v` has no neighbors.
pub fn alpha_beta(g: &Graph, tc: &TcResult, v: &NodeId, tie_eps: f64) -> Result<Option<(f64, f64)>> {
    let ix = g.require(v)?;
    let ev = evidence_for(g, tc.node_weights(), ix, tie_eps);
    Ok((ev.neighbors > 0).then_some((ev.alpha, ev.beta)))
}

fn base_role(ev: &Evidence, threshold: f64) -> Role {
    if ev.neighbors == 0 {
        Role::Margin
    } else if ev.alpha > threshold {
        Role::Core
    } else if ev.lower == 0 {
        Role::Margin
    } else if ev.lower == ev.higher {
        Role::Bridge
    } else {
        Role::Mediated
    }
}

pub fn classify_roles(g: &Graph, tc: &TcResult, cfg: &RoleConfig) -> Result<RoleMap> {
    cfg.validate()?;
    let weights = tc.node_weights();
    if weights.len() != g.node_count() {
        return Err(Error::InvalidConfig("TC result does not match graph".into()));
    }
    let evidence: Vec<Evidence> = (0..g.node_count())
        .map(|v| evidence_for(g, weights, v, cfg.tie_eps))
        .collect();
    let base: Vec<Role> = evidence
        .iter()
        .map(|ev| base_role(ev, cfg.core_threshold))
        .collect();

    // Weights are normalized per component, so these are the centers of
    // every component at once.
    let centers = tc.centers(cfg.tie_eps);
    let mut roles = base.clone();
    for &c in &centers {
        let nbrs = g.distinct_neighbors(c);
        if nbrs.is_empty() {
            continue;
        }
        if !cfg.override_tied_centers && evidence[c].lower + evidence[c].higher < nbrs.len() {
            continue;
        }
        roles[c] = if nbrs.iter().all(|&w| base[w] == Role::Core) {
            Role::Bridge
        } else {
            Role::Core
        };
    }
    Ok(RoleMap {
        roles,
        evidence,
        centers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture_center_bridge, fixture_tree16};
    use crate::graph::build_graph;
    use crate::tc::{compute_tc, TcConfig};

    fn ids(g: &Graph, v: &[usize]) -> Vec<String> {
        v.iter().map(|&i| g.node_id(i).to_string()).collect()
    }

    #[test]
    fn tree16_alpha_beta() {
        let g = fixture_tree16();
        let tc = compute_tc(&g, &TcConfig::default()).unwrap();
        let ab = |v: u32| alpha_beta(&g, &tc, &v.into(), DEFAULT_TIE_EPS).unwrap().unwrap();
        assert_eq!(ab(2), (1.0, 0.0));
        assert_eq!(ab(7), (0.5, 0.5));
        assert_eq!(ab(9), (0.0, 1.0));
        assert_eq!(ab(1), (0.8, 0.2));
    }

    #[test]
    fn tree16_roles_at_default_threshold() {
        let g = fixture_tree16();
        let tc = compute_tc(&g, &TcConfig::default()).unwrap();
        let roles = classify_roles(&g, &tc, &RoleConfig::default()).unwrap();
        assert_eq!(ids(&g, &roles.cores()), ["1", "2", "3"]);
        assert_eq!(ids(&g, &roles.with_role(Role::Bridge)), ["7", "12"]);
        assert_eq!(roles.with_role(Role::Margin).len(), 11);
        assert!(roles.with_role(Role::Mediated).is_empty());
    }

    #[test]
    fn center_with_all_core_neighbors_is_bridge() {
        let g = fixture_center_bridge();
        let tc = compute_tc(&g, &TcConfig::default()).unwrap();
        let roles = classify_roles(&g, &tc, &RoleConfig::default()).unwrap();
        let m = g.require(&0.into()).unwrap();
        assert_eq!(roles.centers, vec![m]);
        assert_eq!(roles.role(m), Role::Bridge);
        assert_eq!(ids(&g, &roles.cores()), ["1", "4"]);
    }

    #[test]
    fn equal_pair_is_margin() {
        let g = build_graph(["u", "v"], [("u", "v")], false).unwrap();
        let tc = compute_tc(&g, &TcConfig::default()).unwrap();
        let roles = classify_roles(&g, &tc, &RoleConfig::default()).unwrap();
        assert_eq!(roles.evidence[0].alpha, 0.0);
        assert_eq!(roles.evidence[0].beta, 0.0);
        assert_eq!(roles.roles, vec![Role::Margin, Role::Margin]);

        let cfg = RoleConfig {
            override_tied_centers: true,
            ..RoleConfig::default()
        };
        let roles = classify_roles(&g, &tc, &cfg).unwrap();
        assert_eq!(roles.roles, vec![Role::Core, Role::Core]);
    }

    #[test]
    fn isolated_node_is_margin() {
        let g = build_graph([1, 2, 3], [(1, 2)], false).unwrap();
        let tc = compute_tc(&g, &TcConfig::default()).unwrap();
        let roles = classify_roles(&g, &tc, &RoleConfig::default()).unwrap();
        assert_eq!(roles.role(2), Role::Margin);
        assert!(alpha_beta(&g, &tc, &3.into(), DEFAULT_TIE_EPS).unwrap().is_none());
    }

    #[test]
    fn threshold_validation() {
        assert!(RoleConfig::with_threshold(0.49).validate().is_err());
        assert!(RoleConfig::with_threshold(1.01).validate().is_err());
        assert!(RoleConfig::with_threshold(0.5).validate().is_ok());
        assert!(RoleConfig::with_threshold(1.0).validate().is_ok());
    }

    #[test]
    fn relative_tie_comparison() {
        assert_eq!(compare_tc(1e-12, 1.0000000000001e-12, 1e-9), Ordering::Equal);
        assert_eq!(compare_tc(1e-12, 2e-12, 1e-9), Ordering::Less);
        assert_eq!(compare_tc(0.5, 0.25, 1e-9), Ordering::Greater);
    }
}
