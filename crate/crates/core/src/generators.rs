//! Seeded graph generators and the small hand-built fixtures used across the
//! test suites.
//!
//! Generated node ids are the integers `0..n`; lattice node `(r, c)` gets id
//! `r * cols + c`. Randomized families draw from a ChaCha8 stream seeded with
//! [`GeneratorSpec::seed`], so a spec always yields the same graph.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centrality;
use crate::error::{Error, Result};
use crate::graph::{build_graph, Graph, GraphBuilder};
use crate::tc::TcResult;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Ring { n: usize },
    Lattice { rows: usize, cols: usize },
    Complete { n: usize },
    WsSmallWorld { n: usize, k: usize, p: f64 },
    ErRandom { n: usize, p: f64 },
    Path { n: usize },
    /// `n` nodes in total: center `0` and leaves `1..n`.
    Star { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family) -> Self {
        Self { family, seed: 0 }
    }

    pub fn seeded(family: Family, seed: u64) -> Self {
        Self { family, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGenerator(msg));
        match self.family {
            Family::Ring { n } if n < 3 => bad(format!("ring needs n >= 3, got {n}")),
            Family::Lattice { rows, cols } if rows < 2 || cols < 2 => {
                bad(format!("lattice needs rows, cols >= 2, got {rows}x{cols}"))
            }
            Family::Complete { n } | Family::Path { n } if n < 1 => {
                bad("n must be >= 1".to_owned())
            }
            Family::Star { n } if n < 2 => bad(format!("star needs n >= 2, got {n}")),
            Family::WsSmallWorld { n, k, p } => {
                if k % 2 != 0 {
                    bad(format!("small-world k must be even, got {k}"))
                } else if k >= n {
                    bad(format!("small-world k must be < n, got k={k}, n={n}"))
                } else if !(0.0..=1.0).contains(&p) {
                    bad(format!("rewiring probability must be in [0,1], got {p}"))
                } else {
                    Ok(())
                }
            }
            Family::ErRandom { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("edge probability must be in [0,1], got {p}"))
            }
            _ => Ok(()),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, edges): (usize, Vec<(usize, usize)>) = match spec.family {
        Family::Ring { n } => (n, (0..n).map(|i| (i, (i + 1) % n)).collect()),
        Family::Path { n } => (n, (1..n).map(|i| (i - 1, i)).collect()),
        Family::Star { n } => (n, (1..n).map(|i| (0, i)).collect()),
        Family::Complete { n } => (
            n,
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect(),
        ),
        Family::Lattice { rows, cols } => {
            let mut edges = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            (rows * cols, edges)
        }
        Family::ErRandom { n, p } => {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((i, j));
                    }
                }
            }
            (n, edges)
        }
        Family::WsSmallWorld { n, k, p } => (n, watts_strogatz(n, k, p, &mut rng)),
    };
    build_graph(0..n, edges, false)
}

/// Ring lattice where every node links to its `k/2` clockwise neighbors,
/// then each lattice edge is rewired with probability `p` to a uniformly
/// chosen endpoint that is neither the source nor already adjacent.
fn watts_strogatz(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut edges = Vec::with_capacity(n * k / 2);
    for j in 1..=k / 2 {
        for u in 0..n {
            edges.push((u, (u + j) % n));
        }
    }
    let mut present: HashSet<(usize, usize)> = edges.iter().map(|&(a, b)| key(a, b)).collect();
    let mut degree = vec![k; n];
    for edge in edges.iter_mut() {
        if rng.random::<f64>() >= p {
            continue;
        }
        let (u, v) = *edge;
        if degree[u] >= n - 1 {
            continue;
        }
        let w = loop {
            let w = rng.random_range(0..n);
            if w != u && !present.contains(&key(u, w)) {
                break w;
            }
        };
        present.remove(&key(u, v));
        present.insert(key(u, w));
        degree[v] -= 1;
        degree[w] += 1;
        *edge = (u, w);
    }
    edges
}

/// The 16-node tree used for the centrality comparison: hubs 1, 2 and 3 of
/// degree 5, connectors 7 and 12, and eleven leaves.
pub fn fixture_tree16() -> Graph {
    build_graph(
        1u32..=16,
        [
            (1, 4),
            (1, 5),
            (1, 6),
            (1, 8),
            (1, 7),
            (7, 2),
            (2, 9),
            (2, 10),
            (2, 11),
            (2, 12),
            (12, 3),
            (3, 13),
            (3, 14),
            (3, 15),
            (3, 16),
        ],
        false,
    )
    .expect("static fixture")
}

/// Reference row for one node of [`fixture_tree16`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tree16Row {
    pub node: u32,
    pub information: f64,
    pub degree: f64,
    pub closeness: f64,
    pub betweenness: f64,
    pub pagerank: f64,
    pub log_tc: f64,
}

const fn row(
    node: u32,
    information: f64,
    degree: f64,
    closeness: f64,
    betweenness: f64,
    pagerank: f64,
    log_tc: f64,
) -> Tree16Row {
    Tree16Row {
        node,
        information,
        degree,
        closeness,
        betweenness,
        pagerank,
        log_tc,
    }
}

/// Published three-decimal centrality values for [`fixture_tree16`].
pub const TREE16_REFERENCE: [Tree16Row; 16] = [
    row(2, 0.591, 0.333, 0.455, 0.714, 0.153, 0.0),
    row(7, 0.389, 0.133, 0.405, 0.476, 0.063, -0.755),
    row(12, 0.389, 0.133, 0.405, 0.476, 0.063, -0.755),
    row(9, 0.116, 0.067, 0.319, 0.000, 0.035, -0.827),
    row(10, 0.116, 0.067, 0.319, 0.000, 0.035, -0.827),
    row(11, 0.116, 0.067, 0.319, 0.000, 0.035, -0.827),
    row(1, 0.444, 0.333, 0.349, 0.476, 0.161, -2.454),
    row(3, 0.444, 0.333, 0.349, 0.476, 0.161, -2.454),
    row(4, 0.106, 0.067, 0.263, 0.000, 0.037, -5.718),
    row(5, 0.106, 0.067, 0.263, 0.000, 0.037, -5.718),
    row(6, 0.106, 0.067, 0.263, 0.000, 0.037, -5.718),
    row(8, 0.106, 0.067, 0.263, 0.000, 0.037, -5.718),
    row(13, 0.106, 0.067, 0.263, 0.000, 0.037, -5.718),
    row(14, 0.106, 0.067, 0.263, 0.000, 0.037, -5.718),
    row(15, 0.106, 0.067, 0.263, 0.000, 0.037, -5.718),
    row(16, 0.106, 0.067, 0.263, 0.000, 0.037, -5.718),
];

/// Tolerance of the structural cross-check in [`verified_fixture_tree16`].
pub const TREE16_CHECK_TOL: f64 = 0.001;

/// [`fixture_tree16`], rejected unless its degree, closeness and betweenness
/// columns reproduce [`TREE16_REFERENCE`] within [`TREE16_CHECK_TOL`].
pub fn verified_fixture_tree16() -> Result<Graph> {
    let g = fixture_tree16();
    let degree = centrality::degree_centrality(&g)?;
    let closeness = centrality::closeness_centrality(&g)?;
    let betweenness = centrality::betweenness_centrality(&g)?;
    for r in &TREE16_REFERENCE {
        let ix = g.require(&r.node.into())?;
        for (name, got, want) in [
            ("degree", degree.scores[ix], r.degree),
            ("closeness", closeness.scores[ix], r.closeness),
            ("betweenness", betweenness.scores[ix], r.betweenness),
        ] {
            if (got - want).abs() >= TREE16_CHECK_TOL {
                return Err(Error::InvalidConfig(format!(
                    "tree fixture mismatch: {name}({}) = {got:.4}, reference {want}",
                    r.node
                )));
            }
        }
    }
    Ok(g)
}

/// Ten-node graph for local community expansion, with pinned node weights.
///
/// The weights are a witness chosen so that expansion from `B` visits
/// `C, D, E`, then `F, G, H` from `D` and `I, J` from `E`, and so that `D`
/// is the nearest core of `F`.
pub fn fixture_expansion() -> (Graph, TcResult) {
    let g = build_graph(
        ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J"],
        [
            ("A", "B"),
            ("B", "C"),
            ("B", "D"),
            ("B", "E"),
            ("D", "F"),
            ("D", "G"),
            ("D", "H"),
            ("E", "I"),
            ("E", "J"),
        ],
        false,
    )
    .expect("static fixture");
    let weights = vec![1.0, 0.9, 0.3, 0.7, 0.6, 0.4, 0.35, 0.3, 0.25, 0.2];
    let tc = TcResult::from_node_weights(&g, weights).expect("positive weights");
    (g, tc)
}

/// Two triangles joined through a middle node `0` attached to one corner of
/// each. Node `0` is the unique topological center and both of its
/// neighbors are core nodes.
pub fn fixture_center_bridge() -> Graph {
    let mut b = GraphBuilder::new(false);
    for (u, v) in [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6), (0, 1), (0, 4)] {
        b.add_edge(u, v);
    }
    b.build().expect("static fixture")
}
