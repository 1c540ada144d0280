//! Classical centrality measures used as a comparison baseline.
//!
//! All geodesics are hop counts; edge weights never enter distances.
//! Path-based measures (betweenness, closeness, efficiency, information
//! centrality) work on the simple graph underneath the multigraph: parallel
//! edges collapse into one and self-loops are dropped. In a directed graph
//! they follow arc direction.
//!
//! Per-source work runs in parallel and is reduced in source order, so the
//! result does not depend on the worker count.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Direction, Graph};

const SOURCE_CHUNK: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentralityReport {
    pub measure: String,
    /// One score per node, in node index order.
    pub scores: Vec<f64>,
    /// Per-edge scores, only filled by betweenness.
    pub edge_scores: Option<Vec<f64>>,
    /// Node indices the measure could not score meaningfully (e.g. isolated
    /// nodes under closeness).
    pub flagged: Vec<usize>,
    /// `false` when an iterative measure stopped at its iteration cap.
    pub converged: bool,
}

impl CentralityReport {
    fn new(measure: &str, scores: Vec<f64>) -> Self {
        Self {
            measure: measure.to_owned(),
            scores,
            edge_scores: None,
            flagged: Vec::new(),
            converged: true,
        }
    }
}

fn require_nodes(g: &Graph, measure: &'static str, required: usize) -> Result<()> {
    if g.node_count() < required {
        return Err(Error::TooFewNodes {
            measure,
            required,
            actual: g.node_count(),
        });
    }
    Ok(())
}

/// Collapsed adjacency: distinct non-loop neighbors, following out-arcs in a
/// directed graph.
fn simple_adjacency(g: &Graph) -> Vec<Vec<usize>> {
    let dir = if g.is_directed() { Direction::Out } else { Direction::Both };
    (0..g.node_count())
        .map(|v| {
            let mut out: Vec<usize> = g.neighbor_indices(v, dir).filter(|&w| w != v).collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect()
}

/// BFS over `adj`, treating `blocked` as if all its edges were removed.
fn bfs(adj: &[Vec<usize>], s: usize, blocked: Option<usize>) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    if blocked == Some(s) {
        return dist;
    }
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].map_or(0, |d| d + 1);
        for &w in &adj[v] {
            if dist[w].is_none() && blocked != Some(w) {
                dist[w] = Some(d);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Sum `f(source)` vectors over all sources in fixed source order.
fn reduce_sources<F>(n: usize, len: usize, f: F) -> Vec<f64>
where
    F: Fn(usize) -> Vec<f64> + Sync,
{
    let mut total = vec![0.0; len];
    let sources: Vec<usize> = (0..n).collect();
    for chunk in sources.chunks(SOURCE_CHUNK) {
        let parts: Vec<Vec<f64>> = chunk.par_iter().map(|&s| f(s)).collect();
        for part in parts {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
    }
    total
}

/// `deg(v) / (n - 1)` with multigraph degree (self-loops count twice).
pub fn degree_centrality(g: &Graph) -> Result<CentralityReport> {
    require_nodes(g, "degree centrality", 2)?;
    let denom = (g.node_count() - 1) as f64;
    let scores = (0..g.node_count())
        .map(|v| g.degree(v) as f64 / denom)
        .collect();
    Ok(CentralityReport::new("degree", scores))
}

/// In- and out-degree variants for directed graphs.
pub fn degree_centrality_directed(g: &Graph) -> Result<(CentralityReport, CentralityReport)> {
    require_nodes(g, "degree centrality", 2)?;
    if !g.is_directed() {
        return Err(Error::NotDirected("in/out degree centrality"));
    }
    let denom = (g.node_count() - 1) as f64;
    let n = g.node_count();
    Ok((
        CentralityReport::new(
            "in_degree",
            (0..n).map(|v| g.in_degree(v) as f64 / denom).collect(),
        ),
        CentralityReport::new(
            "out_degree",
            (0..n).map(|v| g.out_degree(v) as f64 / denom).collect(),
        ),
    ))
}

/// Shortest-path betweenness over ordered pairs `s != v != t`, normalized by
/// `(n-1)(n-2)`. Edge scores are raw ordered-pair dependencies, split
/// evenly across parallel copies of an edge.
pub fn betweenness_centrality(g: &Graph) -> Result<CentralityReport> {
    require_nodes(g, "betweenness centrality", 3)?;
    let n = g.node_count();
    let adj = simple_adjacency(g);

    // Each simple pair (v, w) gets a slot; edge dependencies land there.
    let mut pair_slot: HashMap<(usize, usize), usize> = HashMap::new();
    let key = |a: usize, b: usize| if g.is_directed() { (a, b) } else { (a.min(b), a.max(b)) };
    for (v, nbrs) in adj.iter().enumerate() {
        for &w in nbrs {
            let next = pair_slot.len();
            pair_slot.entry(key(v, w)).or_insert(next);
        }
    }
    let slots = pair_slot.len();
    // Neighbor lists aligned with adj, carrying pair slots.
    let adj_slots: Vec<Vec<usize>> = adj
        .iter()
        .enumerate()
        .map(|(v, nbrs)| nbrs.iter().map(|&w| pair_slot[&key(v, w)]).collect())
        .collect();

    let totals = reduce_sources(n, n + slots, |s| {
        let mut out = vec![0.0; n + slots];
        let mut sigma = vec![0.0f64; n];
        let mut dist: Vec<Option<u32>> = vec![None; n];
        let mut order = Vec::with_capacity(n);
        sigma[s] = 1.0;
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let dv = dist[v].unwrap_or(0);
            for &w in &adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
                if dist[w] == Some(dv + 1) {
                    sigma[w] += sigma[v];
                }
            }
        }
        // adj holds out-lists, so dependencies are pulled from successors:
        // arcs v -> w with dist[w] = dist[v] + 1.
        let mut delta = vec![0.0f64; n];
        for &v in order.iter().rev() {
            let dv = dist[v].unwrap_or(0);
            for (k, &w) in adj[v].iter().enumerate() {
                if dist[w] == Some(dv + 1) {
                    let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                    delta[v] += c;
                    out[n + adj_slots[v][k]] += c;
                }
            }
            if v != s {
                out[v] += delta[v];
            }
        }
        out
    });

    let norm = ((n - 1) * (n - 2)) as f64;
    let scores = totals[..n].iter().map(|b| b / norm).collect();

    let mut multiplicity = vec![0usize; slots];
    let edge_slot: Vec<Option<usize>> = g
        .edges()
        .iter()
        .map(|e| {
            if e.is_loop() {
                return None;
            }
            let slot = pair_slot.get(&key(e.source, e.target)).copied();
            if let Some(s) = slot {
                multiplicity[s] += 1;
            }
            slot
        })
        .collect();
    let edge_scores = edge_slot
        .iter()
        .map(|slot| slot.map_or(0.0, |s| totals[n + s] / multiplicity[s] as f64))
        .collect();

    let mut report = CentralityReport::new("betweenness", scores);
    report.edge_scores = Some(edge_scores);
    Ok(report)
}

/// `(r - 1) / Σ d(v, t)` where `r` is the size of the part of the graph
/// reachable from `v`. Nodes that reach nothing score 0 and are flagged.
pub fn closeness_centrality(g: &Graph) -> Result<CentralityReport> {
    let adj = simple_adjacency(g);
    let per_node: Vec<Option<f64>> = (0..g.node_count())
        .into_par_iter()
        .map(|v| {
            let dist = bfs(&adj, v, None);
            let (reached, total) = dist
                .iter()
                .flatten()
                .fold((0u64, 0u64), |(c, t), &d| (c + 1, t + u64::from(d)));
            (reached >= 2).then(|| (reached - 1) as f64 / total as f64)
        })
        .collect();
    let mut report = CentralityReport::new(
        "closeness",
        per_node.iter().map(|s| s.unwrap_or(0.0)).collect(),
    );
    report.flagged = per_node
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
        .map(|(i, _)| i)
        .collect();
    Ok(report)
}

/// PageRank by power iteration with uniform teleport. Undirected edges act
/// as two arcs, a self-loop as one. Dangling mass is spread uniformly.
/// Iteration stops when the L1 change drops below `tol`.
pub fn pagerank(g: &Graph, damping: f64, tol: f64, max_iter: usize) -> Result<CentralityReport> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::InvalidConfig(format!("damping must be in (0,1), got {damping}")));
    }
    let n = g.node_count();
    let nf = n as f64;
    // in-arcs per node, and out-arc counts
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out_count = vec![0usize; n];
    for e in g.edges() {
        incoming[e.target].push(e.source);
        out_count[e.source] += 1;
        if !g.is_directed() && !e.is_loop() {
            incoming[e.source].push(e.target);
            out_count[e.target] += 1;
        }
    }
    let mut x = vec![1.0 / nf; n];
    let mut converged = false;
    for _ in 0..max_iter {
        let dangling: f64 = (0..n).filter(|&v| out_count[v] == 0).map(|v| x[v]).sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        let next: Vec<f64> = (0..n)
            .into_par_iter()
            .with_min_len(512)
            .map(|v| {
                let inflow: f64 = incoming[v].iter().map(|&u| x[u] / out_count[u] as f64).sum();
                base + damping * inflow
            })
            .collect();
        let diff: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if diff < tol {
            converged = true;
            break;
        }
    }
    let mut report = CentralityReport::new("pagerank", x);
    report.converged = converged;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HitsReport {
    pub authority: Vec<f64>,
    pub hub: Vec<f64>,
    pub converged: bool,
    /// Set when the graph has no arcs and the scores are just uniform.
    pub degenerate: bool,
}

fn l2_normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

/// Hubs and authorities on a directed graph, L2-normalized every round.
pub fn hits(g: &Graph, tol: f64, max_iter: usize) -> Result<HitsReport> {
    if !g.is_directed() {
        return Err(Error::NotDirected("HITS"));
    }
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let uniform = vec![1.0 / (n as f64).sqrt(); n];
    if g.edge_count() == 0 {
        return Ok(HitsReport {
            authority: uniform.clone(),
            hub: uniform,
            converged: true,
            degenerate: true,
        });
    }
    let mut hub = uniform.clone();
    let mut auth = uniform;
    let mut converged = false;
    for _ in 0..max_iter {
        let mut next_auth = vec![0.0; n];
        for e in g.edges() {
            next_auth[e.target] += hub[e.source];
        }
        l2_normalize(&mut next_auth);
        let mut next_hub = vec![0.0; n];
        for e in g.edges() {
            next_hub[e.source] += next_auth[e.target];
        }
        l2_normalize(&mut next_hub);
        let diff: f64 = next_auth
            .iter()
            .zip(&auth)
            .chain(next_hub.iter().zip(&hub))
            .map(|(a, b)| (a - b).abs())
            .sum();
        auth = next_auth;
        hub = next_hub;
        if diff < tol {
            converged = true;
            break;
        }
    }
    Ok(HitsReport {
        authority: auth,
        hub,
        converged,
        degenerate: false,
    })
}

fn efficiency_with(adj: &[Vec<usize>], blocked: Option<usize>) -> f64 {
    let n = adj.len();
    let sums = reduce_sources(n, 1, |s| {
        let total: f64 = bfs(adj, s, blocked)
            .iter()
            .flatten()
            .filter(|&&d| d > 0)
            .map(|&d| 1.0 / f64::from(d))
            .sum();
        vec![total]
    });
    sums[0] / (n * (n - 1)) as f64
}

/// Mean inverse geodesic distance over ordered pairs; unreachable pairs add 0.
pub fn network_efficiency(g: &Graph) -> Result<f64> {
    require_nodes(g, "network efficiency", 2)?;
    Ok(efficiency_with(&simple_adjacency(g), None))
}

/// Relative efficiency drop when all edges incident to a node are removed
/// (the node itself stays, isolated).
pub fn information_centrality(g: &Graph) -> Result<CentralityReport> {
    require_nodes(g, "information centrality", 2)?;
    let adj = simple_adjacency(g);
    let base = efficiency_with(&adj, None);
    if base == 0.0 {
        return Err(Error::ZeroEfficiency);
    }
    let scores = (0..g.node_count())
        .map(|v| (base - efficiency_with(&adj, Some(v))) / base)
        .collect();
    Ok(CentralityReport::new("information", scores))
}
