//! Graph representation shared by every analysis in the crate.
//!
//! A [`Graph`] is an immutable multigraph. Nodes are kept sorted by their
//! [`NodeId`] so that node indices double as the canonical output order, and
//! edges keep their insertion order (edge ids are assigned `0..m`).
//!
//! Self-loops and parallel edges are allowed. Directed graphs use the same
//! type with a flag; the incidence lists of a node contain both its in- and
//! out-arcs so that direction-agnostic algorithms need no special casing.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque node identifier.
///
/// Ordering is "natural": identifiers that parse as integers sort
/// numerically and before all other identifiers, which sort
/// lexicographically. Equal integers with different spellings (`01`, `1`)
/// fall back to string order, so `Ord` stays consistent with `Eq`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<i128> {
        self.0.parse().ok()
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

impl From<&String> for NodeId {
    fn from(s: &String) -> Self {
        Self(s.clone())
    }
}

macro_rules! node_id_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for NodeId {
            fn from(v: $t) -> Self {
                Self(v.to_string())
            }
        }
    )*};
}
node_id_from_int!(u8, u16, u32, u64, usize, i32, i64);

/// Edge identifier: position of the edge in construction order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// An edge between two node indices (see [`Graph::node_id`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub source: usize,
    pub target: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }

    /// The endpoint opposite to `v`. For a self-loop this is `v` itself.
    pub fn other(&self, v: usize) -> usize {
        if self.source == v {
            self.target
        } else {
            self.source
        }
    }
}

/// One entry of a node's incidence list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: usize,
    pub edge: EdgeId,
    /// `true` when the owning node is the arc's source. Always `true` in
    /// undirected graphs.
    pub outgoing: bool,
}

/// Which arcs to follow in a directed graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Both,
    Out,
    In,
}

impl Direction {
    fn admits(self, inc: &Incidence, directed: bool) -> bool {
        if !directed {
            return true;
        }
        match self {
            Direction::Both => true,
            Direction::Out => inc.outgoing,
            Direction::In => !inc.outgoing,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    nodes: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    edges: Vec<Edge>,
    directed: bool,
    node_weights: Vec<f64>,
    edge_weights: Vec<f64>,
    relations: Vec<Option<String>>,
    incidence: Vec<Vec<Incidence>>,
}

/// Builds a graph with unit weights from explicit node and edge lists.
///
/// Every endpoint must appear in `nodes`; the first offending edge is named
/// in the error. Edge ids follow the order of `edges`.
pub fn build_graph<N, I, E>(nodes: I, edges: E, directed: bool) -> Result<Graph>
where
    N: Into<NodeId>,
    I: IntoIterator<Item = N>,
    E: IntoIterator<Item = (N, N)>,
{
    let mut b = GraphBuilder::new(directed).strict();
    for n in nodes {
        b.add_node(n);
    }
    for (u, v) in edges {
        b.add_edge(u, v);
    }
    b.build()
}

/// Incremental graph construction.
///
/// By default edge endpoints are added as nodes implicitly; call
/// [`GraphBuilder::strict`] to require explicit node declarations.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    directed: bool,
    strict: bool,
    nodes: Vec<NodeId>,
    node_weights: Vec<(NodeId, f64)>,
    edges: Vec<PendingEdge>,
}

#[derive(Clone, Debug)]
struct PendingEdge {
    source: NodeId,
    target: NodeId,
    weight: f64,
    relation: Option<String>,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> Self {
        Self {
            directed,
            ..Self::default()
        }
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    pub fn add_node(&mut self, id: impl Into<NodeId>) -> &mut Self {
        self.nodes.push(id.into());
        self
    }

    pub fn set_node_weight(&mut self, id: impl Into<NodeId>, weight: f64) -> &mut Self {
        self.node_weights.push((id.into(), weight));
        self
    }

    pub fn add_edge(&mut self, u: impl Into<NodeId>, v: impl Into<NodeId>) -> &mut Self {
        self.push_edge(u.into(), v.into(), 1.0, None)
    }

    pub fn add_weighted_edge(
        &mut self,
        u: impl Into<NodeId>,
        v: impl Into<NodeId>,
        weight: f64,
    ) -> &mut Self {
        self.push_edge(u.into(), v.into(), weight, None)
    }

    pub fn add_relation_edge(
        &mut self,
        u: impl Into<NodeId>,
        v: impl Into<NodeId>,
        weight: f64,
        relation: impl Into<String>,
    ) -> &mut Self {
        self.push_edge(u.into(), v.into(), weight, Some(relation.into()))
    }

    fn push_edge(
        &mut self,
        source: NodeId,
        target: NodeId,
        weight: f64,
        relation: Option<String>,
    ) -> &mut Self {
        self.edges.push(PendingEdge {
            source,
            target,
            weight,
            relation,
        });
        self
    }

    pub fn build(self) -> Result<Graph> {
        let mut nodes = self.nodes;
        if !self.strict {
            for e in &self.edges {
                nodes.push(e.source.clone());
                nodes.push(e.target.clone());
            }
        }
        nodes.sort();
        nodes.dedup();
        let index: HashMap<NodeId, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();

        let mut node_weights = vec![1.0; nodes.len()];
        for (id, w) in self.node_weights {
            check_weight("node", w)?;
            let ix = *index
                .get(&id)
                .ok_or_else(|| Error::UnknownNode(id.to_string()))?;
            node_weights[ix] = w;
        }

        let mut edges = Vec::with_capacity(self.edges.len());
        let mut edge_weights = Vec::with_capacity(self.edges.len());
        let mut relations = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.into_iter().enumerate() {
            let lookup = |n: &NodeId| {
                index.get(n).copied().ok_or_else(|| Error::DanglingEndpoint {
                    edge: i,
                    node: n.to_string(),
                })
            };
            let source = lookup(&e.source)?;
            let target = lookup(&e.target)?;
            check_weight("edge", e.weight)?;
            edges.push(Edge {
                id: EdgeId(i),
                source,
                target,
            });
            edge_weights.push(e.weight);
            relations.push(e.relation);
        }

        Ok(Graph::assemble(
            nodes,
            index,
            edges,
            self.directed,
            node_weights,
            edge_weights,
            relations,
        ))
    }
}

fn check_weight(what: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight { what, value })
    }
}

impl Graph {
    fn assemble(
        nodes: Vec<NodeId>,
        index: HashMap<NodeId, usize>,
        edges: Vec<Edge>,
        directed: bool,
        node_weights: Vec<f64>,
        edge_weights: Vec<f64>,
        relations: Vec<Option<String>>,
    ) -> Self {
        let mut incidence = vec![Vec::new(); nodes.len()];
        for e in &edges {
            incidence[e.source].push(Incidence {
                neighbor: e.target,
                edge: e.id,
                outgoing: true,
            });
            if !e.is_loop() {
                incidence[e.target].push(Incidence {
                    neighbor: e.source,
                    edge: e.id,
                    outgoing: !directed,
                });
            }
        }
        Self {
            nodes,
            index,
            edges,
            directed,
            node_weights,
            edge_weights,
            relations,
            incidence,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Node ids in index order (which is also id order).
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn node_id(&self, ix: usize) -> &NodeId {
        &self.nodes[ix]
    }

    pub fn index_of(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Like [`Graph::index_of`] but reports unknown ids as an error.
    pub fn require(&self, id: &NodeId) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node_weights
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    pub fn relation(&self, id: EdgeId) -> Option<&str> {
        self.relations[id.0].as_deref()
    }

    pub fn has_relations(&self) -> bool {
        self.relations.iter().any(Option::is_some)
    }

    pub fn incident(&self, ix: usize) -> &[Incidence] {
        &self.incidence[ix]
    }

    /// Undirected degree: parallel edges count separately and a self-loop
    /// counts twice.
    pub fn degree(&self, ix: usize) -> usize {
        self.incidence[ix]
            .iter()
            .map(|inc| if inc.neighbor == ix { 2 } else { 1 })
            .sum()
    }

    pub fn out_degree(&self, ix: usize) -> usize {
        if !self.directed {
            return self.degree(ix);
        }
        self.incidence[ix].iter().filter(|i| i.outgoing).count()
    }

    pub fn in_degree(&self, ix: usize) -> usize {
        if !self.directed {
            return self.degree(ix);
        }
        self.incidence[ix]
            .iter()
            .filter(|i| !i.outgoing || i.neighbor == ix)
            .count()
    }

    /// Neighbor multiset of `v`, sorted by id. A self-loop contributes `v`
    /// once; parallel edges contribute repeated entries.
    pub fn neighbors(&self, v: &NodeId) -> Result<Vec<NodeId>> {
        self.neighbors_directed(v, Direction::Both)
    }

    pub fn neighbors_directed(&self, v: &NodeId, dir: Direction) -> Result<Vec<NodeId>> {
        let ix = self.require(v)?;
        let mut out: Vec<usize> = self
            .neighbor_indices(ix, dir)
            .collect();
        out.sort_unstable();
        Ok(out.into_iter().map(|i| self.nodes[i].clone()).collect())
    }

    pub fn neighbor_indices(&self, ix: usize, dir: Direction) -> impl Iterator<Item = usize> + '_ {
        let directed = self.directed;
        self.incidence[ix]
            .iter()
            .filter(move |inc| dir.admits(inc, directed))
            .map(|inc| inc.neighbor)
    }

    /// Distinct neighbors other than `ix` itself, ascending. Direction is
    /// ignored.
    pub fn distinct_neighbors(&self, ix: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.incidence[ix]
            .iter()
            .map(|inc| inc.neighbor)
            .filter(|&n| n != ix)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Per-node component label, components numbered in the order returned
    /// by [`Graph::connected_components`]. Direction is ignored.
    pub fn component_labels(&self) -> Vec<usize> {
        let comps = self.connected_components();
        let mut labels = vec![0; self.node_count()];
        for (c, members) in comps.iter().enumerate() {
            for &v in members {
                labels[v] = c;
            }
        }
        labels
    }

    /// Connected components as ascending node-index lists, largest first,
    /// ties broken by smallest member. Direction is ignored.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut members = Vec::new();
            while let Some(v) = queue.pop_front() {
                members.push(v);
                for inc in &self.incidence[v] {
                    if !seen[inc.neighbor] {
                        seen[inc.neighbor] = true;
                        queue.push_back(inc.neighbor);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    /// Components as standalone induced subgraphs, in component order.
    pub fn component_subgraphs(&self) -> Vec<Graph> {
        self.connected_components()
            .iter()
            .map(|c| self.induced_subgraph_ix(c).0)
            .collect()
    }

    /// Hop distances from `source`, direction ignored. `None` marks
    /// unreachable nodes.
    pub fn bfs_distances(&self, source: &NodeId) -> Result<Vec<Option<usize>>> {
        let s = self.require(source)?;
        Ok(self.bfs_from(s, Direction::Both))
    }

    /// Hop distances from node index `s`, following arcs per `dir` in a
    /// directed graph.
    pub fn bfs_from(&self, s: usize, dir: Direction) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0) + 1;
            for w in self.neighbor_indices(v, dir) {
                if dist[w].is_none() {
                    dist[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Subgraph induced by `keep`, carrying weights and relation labels over.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> Result<Graph> {
        let ixs = keep
            .iter()
            .map(|id| self.require(id))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.induced_subgraph_ix(&ixs).0)
    }

    /// Index-level induced subgraph. Also returns, for each edge of the
    /// subgraph, the id of the edge it came from.
    pub fn induced_subgraph_ix(&self, keep: &[usize]) -> (Graph, Vec<EdgeId>) {
        let mut mask = vec![false; self.node_count()];
        for &v in keep {
            mask[v] = true;
        }
        // Parent indices ascending == id order, so the new indices follow.
        let parents: Vec<usize> = (0..self.node_count()).filter(|&v| mask[v]).collect();
        let mut remap = vec![usize::MAX; self.node_count()];
        for (new, &old) in parents.iter().enumerate() {
            remap[old] = new;
        }
        let nodes: Vec<NodeId> = parents.iter().map(|&v| self.nodes[v].clone()).collect();
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let node_weights = parents.iter().map(|&v| self.node_weights[v]).collect();

        let mut edges = Vec::new();
        let mut edge_weights = Vec::new();
        let mut relations = Vec::new();
        let mut origin = Vec::new();
        for e in &self.edges {
            if mask[e.source] && mask[e.target] {
                edges.push(Edge {
                    id: EdgeId(edges.len()),
                    source: remap[e.source],
                    target: remap[e.target],
                });
                edge_weights.push(self.edge_weights[e.id.0]);
                relations.push(self.relations[e.id.0].clone());
                origin.push(e.id);
            }
        }
        let g = Graph::assemble(
            nodes,
            index,
            edges,
            self.directed,
            node_weights,
            edge_weights,
            relations,
        );
        (g, origin)
    }

    /// Copy of the graph with every edge's relation label replaced.
    pub fn with_relations(&self, relations: Vec<Option<String>>) -> Graph {
        assert_eq!(relations.len(), self.edge_count());
        let mut g = self.clone();
        g.relations = relations;
        g
    }

    /// Endpoint id pair of an edge.
    pub fn endpoints(&self, id: EdgeId) -> (&NodeId, &NodeId) {
        let e = &self.edges[id.0];
        (&self.nodes[e.source], &self.nodes[e.target])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> Graph {
        build_graph(0..n, (0..n).map(|i| (i, (i + 1) % n)), false).unwrap()
    }

    #[test]
    fn natural_node_order() {
        let mut ids: Vec<NodeId> = ["10", "2", "b", "1", "a", "-3"].iter().map(|&s| s.into()).collect();
        ids.sort();
        let got: Vec<&str> = ids.iter().map(NodeId::as_str).collect();
        assert_eq!(got, ["-3", "1", "2", "10", "a", "b"]);
        assert_ne!(NodeId::from("01").cmp(&NodeId::from("1")), Ordering::Equal);
    }

    #[test]
    fn smallest_graph() {
        let g = build_graph([1, 2], [(1, 2)], false).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_eq!(g.edge_weights(), &[1.0]);
        assert_eq!(g.node_weights(), &[1.0, 1.0]);
    }

    #[test]
    fn dangling_endpoint_is_named() {
        let err = build_graph([1, 2], [(1, 2), (2, 3)], false).unwrap_err();
        match err {
            Error::DanglingEndpoint { edge, node } => {
                assert_eq!(edge, 1);
                assert_eq!(node, "3");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_loop_single_node() {
        let g = build_graph([1], [(1, 1)], false).unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.neighbors(&1.into()).unwrap(), vec![NodeId::from(1)]);
        assert!(g.distinct_neighbors(0).is_empty());
    }

    #[test]
    fn ring_neighbors_and_isolated() {
        let g = ring(4);
        assert_eq!(
            g.neighbors(&0.into()).unwrap(),
            vec![NodeId::from(1), NodeId::from(3)]
        );
        let g = build_graph([1, 2, 3], [(1, 2)], false).unwrap();
        assert!(g.neighbors(&3.into()).unwrap().is_empty());
        assert!(matches!(
            g.neighbors(&9.into()),
            Err(Error::UnknownNode(_))
        ));
    }

    #[test]
    fn parallel_edges_are_kept() {
        let g = build_graph([1, 2], [(1, 2), (2, 1)], false).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.neighbors(&1.into()).unwrap().len(), 2);
        assert_eq!(g.distinct_neighbors(0), vec![1]);
    }

    #[test]
    fn directed_neighbor_filters() {
        let g = build_graph(["a", "b", "c"], [("a", "b"), ("c", "a")], true).unwrap();
        let a = NodeId::from("a");
        let ids = |v: Vec<NodeId>| v.into_iter().map(|n| n.to_string()).collect::<Vec<_>>();
        assert_eq!(ids(g.neighbors(&a).unwrap()), ["b", "c"]);
        assert_eq!(ids(g.neighbors_directed(&a, Direction::Out).unwrap()), ["b"]);
        assert_eq!(ids(g.neighbors_directed(&a, Direction::In).unwrap()), ["c"]);
        assert_eq!((g.out_degree(0), g.in_degree(0)), (1, 1));
    }

    #[test]
    fn components_order_and_partition() {
        let g = build_graph(
            1..=7,
            [(5, 6), (6, 7), (7, 5), (1, 2), (2, 3), (3, 1)],
            false,
        )
        .unwrap();
        let comps = g.connected_components();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![4, 5, 6], vec![3]]);
        let empty = build_graph(Vec::<u32>::new(), Vec::new(), false).unwrap();
        assert!(empty.connected_components().is_empty());
    }

    #[test]
    fn bfs_on_ring_and_unreachable() {
        let g = ring(6);
        let d = g.bfs_distances(&0.into()).unwrap();
        assert_eq!(d, vec![Some(0), Some(1), Some(2), Some(3), Some(2), Some(1)]);
        let g = build_graph([1, 2], Vec::new(), false).unwrap();
        assert_eq!(g.bfs_distances(&1.into()).unwrap(), vec![Some(0), None]);
    }

    #[test]
    fn induced_subgraph_keeps_weights() {
        let mut b = GraphBuilder::new(false);
        b.add_weighted_edge(1, 2, 2.5).add_edge(2, 3).add_edge(3, 1);
        let g = b.build().unwrap();
        let sub = g.induced_subgraph(&[1.into(), 2.into()]).unwrap();
        assert_eq!(sub.edge_count(), 1);
        assert_eq!(sub.edge_weights(), &[2.5]);
        let none = g.induced_subgraph(&[]).unwrap();
        assert!(none.is_empty());
        assert!(g.induced_subgraph(&[9.into()]).is_err());
    }

    #[test]
    fn invalid_weights_rejected() {
        let mut b = GraphBuilder::new(false);
        b.add_weighted_edge(1, 2, -1.0);
        assert!(matches!(b.build(), Err(Error::InvalidWeight { .. })));
        let mut b = GraphBuilder::new(false);
        b.add_edge(1, 2).set_node_weight(1, f64::NAN);
        assert!(matches!(b.build(), Err(Error::InvalidWeight { .. })));
    }
}
