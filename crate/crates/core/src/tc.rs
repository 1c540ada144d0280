//! Topological centrality: a mutual-reinforcement fixed point over node and
//! edge weights.
//!
//! One step computes, from frozen previous weights,
//!
//! ```text
//! temp(i)   = w(i) + Σ_{e=(i,j)} ω_r(e) · w(e) · w(j)
//! temp(e)   = temp(i) + temp(j)
//! ```
//!
//! and then divides node temps by their maximum and edge temps by theirs.
//! Normalization is done per connected component, so every component has its
//! own topological centers (nodes at weight 1). Convergence is measured as
//! the squared difference between consecutive normalized weight vectors.
//!
//! Self-loops add a single `w(e) · w(i)` term to their node. Parallel edges
//! each add their own term. Edge direction is ignored.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Default tolerance used to decide that a node sits at the maximum weight.
pub const DEFAULT_TIE_EPS: f64 = 1e-9;

const PAR_MIN_LEN: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TcConfig {
    pub max_iterations: usize,
    pub eps_nodes: f64,
    pub eps_edges: f64,
    /// Per-relation multipliers. Edges whose label is absent from the map use
    /// a multiplier of 1 and are reported in [`TcResult::unweighted_relations`].
    pub relation_weights: Option<BTreeMap<String, f64>>,
}

impl Default for TcConfig {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            eps_nodes: 1e-3,
            eps_edges: 1e-3,
            relation_weights: None,
        }
    }
}

impl TcConfig {
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps_nodes = eps;
        self.eps_edges = eps;
        self
    }

    pub fn with_max_iterations(mut self, max: usize) -> Self {
        self.max_iterations = max;
        self
    }

    pub fn with_relation_weights(mut self, weights: BTreeMap<String, f64>) -> Self {
        self.relation_weights = Some(weights);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be >= 1".into()));
        }
        for (name, eps) in [("eps_nodes", self.eps_nodes), ("eps_edges", self.eps_edges)] {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be > 0, got {eps}")));
            }
        }
        if let Some(rw) = &self.relation_weights {
            for (label, &w) in rw {
                if !(w > 0.0 && w.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "relation weight for `{label}` must be > 0, got {w}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Node and edge weights at some iteration, indexed like the graph.
#[derive(Clone, Debug, PartialEq)]
pub struct TcState {
    pub node_w: Vec<f64>,
    pub edge_w: Vec<f64>,
    pub iteration: usize,
}

impl TcState {
    /// Starting point: the graph's own node and edge weights (unit unless
    /// supplied at construction).
    pub fn initial(g: &Graph) -> Self {
        Self {
            node_w: g.node_weights().to_vec(),
            edge_w: g.edge_weights().to_vec(),
            iteration: 0,
        }
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.node_w.len() != g.node_count() || self.edge_w.len() != g.edge_count() {
            return Err(Error::InvalidConfig(
                "state does not match graph dimensions".into(),
            ));
        }
        if let Some(&w) = self.node_w.iter().find(|&&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidWeight { what: "node", value: w });
        }
        if let Some(&w) = self.edge_w.iter().find(|&&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidWeight { what: "edge", value: w });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TcResult {
    pub state: TcState,
    pub converged: bool,
    /// Per iteration, the largest per-component Σ(Δ node weight)².
    pub node_residuals: Vec<f64>,
    /// Per iteration, the largest per-component Σ(Δ edge weight)².
    pub edge_residuals: Vec<f64>,
    /// Relation labels that had no configured weight.
    pub unweighted_relations: Vec<String>,
}

impl TcResult {
    pub fn node_weights(&self) -> &[f64] {
        &self.state.node_w
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.state.edge_w
    }

    pub fn iterations(&self) -> usize {
        self.state.iteration
    }

    /// Node indices whose weight is within `tie_eps` of 1.
    pub fn centers(&self, tie_eps: f64) -> Vec<usize> {
        self.state
            .node_w
            .iter()
            .enumerate()
            .filter(|(_, &w)| w >= 1.0 - tie_eps)
            .map(|(i, _)| i)
            .collect()
    }

    /// Build a result from externally supplied node weights, e.g. for
    /// replaying role and community logic on pinned values. Edge weights are
    /// derived as normalized endpoint sums.
    pub fn from_node_weights(g: &Graph, node_w: Vec<f64>) -> Result<Self> {
        if node_w.len() != g.node_count() {
            return Err(Error::InvalidConfig("one weight per node required".into()));
        }
        let mut edge_w: Vec<f64> = g
            .edges()
            .iter()
            .map(|e| node_w[e.source] + node_w[e.target])
            .collect();
        let max = edge_w.iter().copied().fold(0.0, f64::max);
        if max > 0.0 {
            edge_w.iter_mut().for_each(|w| *w /= max);
        }
        let state = TcState {
            node_w,
            edge_w,
            iteration: 0,
        };
        state.check(g)?;
        Ok(Self {
            state,
            converged: true,
            node_residuals: Vec::new(),
            edge_residuals: Vec::new(),
            unweighted_relations: Vec::new(),
        })
    }
}

struct Relations {
    per_edge: Vec<f64>,
    missing: Vec<String>,
}

fn relation_multipliers(g: &Graph, cfg: &TcConfig) -> Relations {
    let Some(rw) = &cfg.relation_weights else {
        return Relations {
            per_edge: vec![1.0; g.edge_count()],
            missing: Vec::new(),
        };
    };
    let mut missing = BTreeSet::new();
    let per_edge = g
        .edges()
        .iter()
        .map(|e| match g.relation(e.id) {
            Some(label) => match rw.get(label) {
                Some(&w) => w,
                None => {
                    missing.insert(label.to_owned());
                    1.0
                }
            },
            None => 1.0,
        })
        .collect();
    Relations {
        per_edge,
        missing: missing.into_iter().collect(),
    }
}

fn temps_with(g: &Graph, node_w: &[f64], edge_w: &[f64], omega: &[f64]) -> Vec<f64> {
    (0..g.node_count())
        .into_par_iter()
        .with_min_len(PAR_MIN_LEN)
        .map(|i| {
            let mut t = node_w[i];
            for inc in g.incident(i) {
                let e = inc.edge.0;
                t += omega[e] * edge_w[e] * node_w[inc.neighbor];
            }
            t
        })
        .collect()
}

/// Pre-normalization node weights for one step from `state`.
pub fn node_temps(g: &Graph, state: &TcState, cfg: &TcConfig) -> Result<Vec<f64>> {
    state.check(g)?;
    let rel = relation_multipliers(g, cfg);
    Ok(temps_with(g, &state.node_w, &state.edge_w, &rel.per_edge))
}

struct Components {
    labels: Vec<usize>,
    count: usize,
}

impl Components {
    fn of(g: &Graph) -> Self {
        let labels = g.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        Self { labels, count }
    }
}

struct Advance {
    state: TcState,
    node_res: Vec<f64>,
    edge_res: Vec<f64>,
}

/// One synchronous step; components with `active[c] == false` keep their
/// weights unchanged.
fn advance(g: &Graph, comps: &Components, prev: &TcState, omega: &[f64], active: &[bool]) -> Advance {
    let labels = &comps.labels;
    let temps = temps_with(g, &prev.node_w, &prev.edge_w, omega);
    let edge_temps: Vec<f64> = g
        .edges()
        .par_iter()
        .with_min_len(PAR_MIN_LEN)
        .map(|e| temps[e.source] + temps[e.target])
        .collect();

    let mut node_max = vec![0.0f64; comps.count];
    for (i, &t) in temps.iter().enumerate() {
        let c = labels[i];
        node_max[c] = node_max[c].max(t);
    }
    let mut edge_max = vec![0.0f64; comps.count];
    for (e, &t) in g.edges().iter().zip(&edge_temps) {
        let c = labels[e.source];
        edge_max[c] = edge_max[c].max(t);
    }

    let mut node_w = prev.node_w.clone();
    let mut node_res = vec![0.0; comps.count];
    for (i, w) in node_w.iter_mut().enumerate() {
        let c = labels[i];
        if active[c] {
            let next = temps[i] / node_max[c];
            node_res[c] += (next - *w).powi(2);
            *w = next;
        }
    }
    let mut edge_w = prev.edge_w.clone();
    let mut edge_res = vec![0.0; comps.count];
    for (e, w) in g.edges().iter().zip(edge_w.iter_mut()) {
        let c = labels[e.source];
        if active[c] {
            let next = edge_temps[e.id.0] / edge_max[c];
            edge_res[c] += (next - *w).powi(2);
            *w = next;
        }
    }

    Advance {
        state: TcState {
            node_w,
            edge_w,
            iteration: prev.iteration + 1,
        },
        node_res,
        edge_res,
    }
}

/// A single synchronous update: all node temps from the previous weights,
/// then edge temps from node temps, then per-component normalization.
pub fn tc_step(g: &Graph, state: &TcState, cfg: &TcConfig) -> Result<TcState> {
    state.check(g)?;
    let comps = Components::of(g);
    let rel = relation_multipliers(g, cfg);
    let active = vec![true; comps.count];
    Ok(advance(g, &comps, state, &rel.per_edge, &active).state)
}

/// Iterate [`tc_step`] from the initial weights until both residuals drop
/// below their thresholds or `max_iterations` steps have run.
///
/// Each connected component converges independently; once a component has
/// converged its weights are frozen. Hitting the iteration cap is not an
/// error and is reported through [`TcResult::converged`].
pub fn compute_tc(g: &Graph, cfg: &TcConfig) -> Result<TcResult> {
    cfg.validate()?;
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut state = TcState::initial(g);
    state.check(g)?;

    let comps = Components::of(g);
    let rel = relation_multipliers(g, cfg);
    let mut active = vec![true; comps.count];
    let mut node_residuals = Vec::new();
    let mut edge_residuals = Vec::new();

    while state.iteration < cfg.max_iterations && active.iter().any(|&a| a) {
        let step = advance(g, &comps, &state, &rel.per_edge, &active);
        let mut node_r = 0.0f64;
        let mut edge_r = 0.0f64;
        for (c, on) in active.iter_mut().enumerate() {
            if !*on {
                continue;
            }
            node_r = node_r.max(step.node_res[c]);
            edge_r = edge_r.max(step.edge_res[c]);
            if step.node_res[c] < cfg.eps_nodes && step.edge_res[c] < cfg.eps_edges {
                *on = false;
            }
        }
        node_residuals.push(node_r);
        edge_residuals.push(edge_r);
        state = step.state;
    }

    Ok(TcResult {
        state,
        converged: active.iter().all(|&a| !a),
        node_residuals,
        edge_residuals,
        unweighted_relations: rel.missing,
    })
}

/// Nodes at (within `tie_eps` of) weight 1, in id order.
pub fn topological_centers(g: &Graph, result: &TcResult, tie_eps: f64) -> Vec<NodeId> {
    result
        .centers(tie_eps)
        .into_iter()
        .map(|i| g.node_id(i).clone())
        .collect()
}

/// Natural log of node weights; centers map to 0.
pub fn log_tc(result: &TcResult) -> Vec<f64> {
    result.state.node_w.iter().map(|w| w.ln()).collect()
}
