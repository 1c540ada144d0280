//! Research networks built from bibliographic records.
//!
//! Records are JSON lines:
//!
//! ```text
//! {"paper_id": "p1", "title": "...", "year": 2004, "authors": ["a", "b"], "venue": "v", "cited": ["p0"]}
//! ```
//!
//! `title`, `venue` and `cited` may be omitted.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, NodeId};

pub const REL_AUTHOR_OF: &str = "authorOf";
pub const REL_COAUTHOR: &str = "coauthor";
pub const REL_PUBLISHED_IN: &str = "publishedIn";
pub const REL_CITE: &str = "cite";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    #[serde(default)]
    pub title: String,
    pub year: i32,
    pub authors: Vec<String>,
    #[serde(default)]
    pub venue: String,
    #[serde(default)]
    pub cited: Vec<String>,
}

impl PaperRecord {
    /// Authors in order with repeats removed.
    pub fn distinct_authors(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.authors
            .iter()
            .map(String::as_str)
            .filter(|a| seen.insert(*a))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordError {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParsedRecords {
    pub records: Vec<PaperRecord>,
    pub errors: Vec<RecordError>,
}

/// Parse JSON-lines records. Blank lines and lines starting with `#` are
/// skipped; bad lines are collected and parsing continues. Only I/O failures
/// abort.
pub fn parse_records<R: BufRead>(input: R) -> Result<ParsedRecords> {
    let mut out = ParsedRecords::default();
    let mut ids = HashSet::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut reject = |reason: String| out.errors.push(RecordError { line: i + 1, reason });
        let rec: PaperRecord = match serde_json::from_str(trimmed) {
            Ok(r) => r,
            Err(e) => {
                reject(e.to_string());
                continue;
            }
        };
        if rec.paper_id.is_empty() {
            reject("empty paper_id".into());
        } else if rec.authors.is_empty() {
            reject(format!("paper `{}` has no authors", rec.paper_id));
        } else if rec.authors.iter().any(String::is_empty) {
            reject(format!("paper `{}` has an empty author name", rec.paper_id));
        } else if !ids.insert(rec.paper_id.clone()) {
            reject(format!("duplicate paper_id `{}`", rec.paper_id));
        } else {
            out.records.push(rec);
        }
    }
    Ok(out)
}

/// Coauthor arcs `a_i -> a_j` for every author pair with `i < j` in each
/// paper, one self-loop for a sole author. Arcs repeat across papers.
pub fn build_coauthor_network(records: &[PaperRecord]) -> Result<Graph> {
    let mut b = GraphBuilder::new(true);
    for r in records {
        let authors = r.distinct_authors();
        for a in &authors {
            b.add_node(*a);
        }
        if let [solo] = authors.as_slice() {
            b.add_relation_edge(*solo, *solo, 1.0, REL_COAUTHOR);
        }
        for (i, a) in authors.iter().enumerate() {
            for c in &authors[i + 1..] {
                b.add_relation_edge(*a, *c, 1.0, REL_COAUTHOR);
            }
        }
    }
    b.build()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CitationMode {
    /// Reject the corpus on the first violation.
    Strict,
    /// Drop offending arcs and report them.
    #[default]
    Lenient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DroppedCitation {
    pub citing: String,
    pub cited: String,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct CitationNetwork {
    pub graph: Graph,
    /// Citations of papers outside the corpus.
    pub dangling: usize,
    pub dropped: Vec<DroppedCitation>,
}

/// Back edges of a depth-first search over `arcs` (node indices), visiting
/// roots and successors in index order. Removing them leaves a DAG.
fn back_edges(n: usize, arcs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut succ = vec![Vec::new(); n];
    for &(u, v) in arcs {
        succ[u].push(v);
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; n];
    let mut back = Vec::new();
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if let Some(&v) = succ[u].get(*next) {
                *next += 1;
                match state[v] {
                    0 => {
                        state[v] = 1;
                        stack.push((v, 0));
                    }
                    1 => back.push((u, v)),
                    _ => {}
                }
            } else {
                state[u] = 2;
                stack.pop();
            }
        }
    }
    back
}

/// One directed cycle through the arc `u -> v`, as `v .. u`.
fn cycle_through(n: usize, arcs: &[(usize, usize)], u: usize, v: usize) -> Vec<usize> {
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in arcs {
        succ[a].push(b);
    }
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([v]);
    prev[v] = v;
    while let Some(x) = queue.pop_front() {
        if x == u {
            break;
        }
        for &y in &succ[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![u];
    let mut cur = u;
    while cur != v {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// Arcs `citing -> cited` between corpus papers. Citing a strictly later
/// paper or closing a cycle is a violation; same-year citations are fine.
pub fn build_citation_network(records: &[PaperRecord], mode: CitationMode) -> Result<CitationNetwork> {
    let index: HashMap<&str, usize> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.paper_id.as_str(), i))
        .collect();
    let mut dangling = 0;
    let mut dropped = Vec::new();
    let mut arcs = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let mut seen = HashSet::new();
        for c in &r.cited {
            if !seen.insert(c.as_str()) {
                continue;
            }
            let Some(&j) = index.get(c.as_str()) else {
                dangling += 1;
                continue;
            };
            let cited = &records[j];
            if cited.year > r.year {
                if mode == CitationMode::Strict {
                    return Err(Error::LaterYearCitation {
                        citing: r.paper_id.clone(),
                        citing_year: r.year,
                        cited: cited.paper_id.clone(),
                        cited_year: cited.year,
                    });
                }
                dropped.push(DroppedCitation {
                    citing: r.paper_id.clone(),
                    cited: c.clone(),
                    reason: format!("cites a later paper ({} > {})", cited.year, r.year),
                });
                continue;
            }
            arcs.push((i, j));
        }
    }

    let back: BTreeSet<(usize, usize)> = back_edges(records.len(), &arcs).into_iter().collect();
    if let Some(&(u, v)) = back.iter().next() {
        if mode == CitationMode::Strict {
            let cycle = cycle_through(records.len(), &arcs, u, v);
            return Err(Error::CitationCycle(
                cycle.into_iter().map(|k| records[k].paper_id.clone()).collect(),
            ));
        }
    }
    let mut b = GraphBuilder::new(true);
    for r in records {
        b.add_node(r.paper_id.as_str());
    }
    for &(u, v) in &arcs {
        if back.contains(&(u, v)) {
            dropped.push(DroppedCitation {
                citing: records[u].paper_id.clone(),
                cited: records[v].paper_id.clone(),
                reason: "closes a citation cycle".into(),
            });
        } else {
            b.add_relation_edge(records[u].paper_id.as_str(), records[v].paper_id.as_str(), 1.0, REL_CITE);
        }
    }
    Ok(CitationNetwork {
        graph: b.build()?,
        dangling,
        dropped,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Researcher,
    Paper,
    Venue,
}

impl NodeKind {
    pub fn prefix(self) -> &'static str {
        match self {
            NodeKind::Researcher => "author:",
            NodeKind::Paper => "paper:",
            NodeKind::Venue => "venue:",
        }
    }

    fn of(id: &NodeId) -> NodeKind {
        [NodeKind::Researcher, NodeKind::Paper, NodeKind::Venue]
            .into_iter()
            .find(|k| id.as_str().starts_with(k.prefix()))
            .expect("heterogeneous node ids are prefixed")
    }
}

#[derive(Clone, Debug)]
pub struct HeteroNetwork {
    pub graph: Graph,
    /// Kind of each node, by node index.
    pub kinds: Vec<NodeKind>,
    pub dangling: usize,
}

/// Researchers, papers and venues linked by `authorOf`, `coauthor`,
/// `publishedIn` and `cite`. Node ids carry a kind prefix (`author:`,
/// `paper:`, `venue:`). Papers without a venue get no `publishedIn` link.
pub fn build_heterogeneous_network(records: &[PaperRecord]) -> Result<HeteroNetwork> {
    let key = |k: NodeKind, s: &str| format!("{}{s}", k.prefix());
    let ids: HashSet<&str> = records.iter().map(|r| r.paper_id.as_str()).collect();
    let mut b = GraphBuilder::new(true);
    let mut dangling = 0;
    for r in records {
        let p = key(NodeKind::Paper, &r.paper_id);
        b.add_node(p.as_str());
        let authors = r.distinct_authors();
        for a in &authors {
            b.add_relation_edge(key(NodeKind::Researcher, a), p.as_str(), 1.0, REL_AUTHOR_OF);
        }
        if let [solo] = authors.as_slice() {
            let s = key(NodeKind::Researcher, solo);
            b.add_relation_edge(s.as_str(), s.as_str(), 1.0, REL_COAUTHOR);
        }
        for (i, a) in authors.iter().enumerate() {
            for c in &authors[i + 1..] {
                b.add_relation_edge(key(NodeKind::Researcher, a), key(NodeKind::Researcher, c), 1.0, REL_COAUTHOR);
            }
        }
        if !r.venue.is_empty() {
            b.add_relation_edge(p.as_str(), key(NodeKind::Venue, &r.venue), 1.0, REL_PUBLISHED_IN);
        }
        let mut seen = HashSet::new();
        for c in r.cited.iter().filter(|c| seen.insert(c.as_str())) {
            if ids.contains(c.as_str()) {
                b.add_relation_edge(p.as_str(), key(NodeKind::Paper, c), 1.0, REL_CITE);
            } else {
                dangling += 1;
            }
        }
    }
    let graph = b.build()?;
    let kinds = graph.nodes().iter().map(NodeKind::of).collect();
    Ok(HeteroNetwork {
        graph,
        kinds,
        dangling,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MotifCensus {
    pub loops: usize,
    pub edges: usize,
    pub triangles: usize,
    /// Papers with more than three authors, keyed by author count.
    pub cliques: BTreeMap<usize, usize>,
}

impl MotifCensus {
    pub fn total(&self) -> usize {
        self.loops + self.edges + self.triangles + self.cliques.values().sum::<usize>()
    }
}

/// Classify each paper by its number of distinct authors.
pub fn motif_census(records: &[PaperRecord]) -> MotifCensus {
    let mut c = MotifCensus::default();
    for r in records {
        match r.distinct_authors().len() {
            0 | 1 => c.loops += 1,
            2 => c.edges += 1,
            3 => c.triangles += 1,
            n => *c.cliques.entry(n).or_insert(0) += 1,
        }
    }
    c
}

/// One network per distinct year, each built from all records up to and
/// including that year.
pub fn cumulative_snapshots<F>(records: &[PaperRecord], build: F) -> Result<Vec<(String, Graph)>>
where
    F: Fn(&[PaperRecord]) -> Result<Graph>,
{
    let mut sorted: Vec<PaperRecord> = records.to_vec();
    sorted.sort_by_key(|r| r.year);
    let years: BTreeSet<i32> = sorted.iter().map(|r| r.year).collect();
    years
        .into_iter()
        .map(|y| {
            let upto = sorted.partition_point(|r| r.year <= y);
            Ok((y.to_string(), build(&sorted[..upto])?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tc::{node_temps, TcConfig, TcState};

    fn rec(id: &str, year: i32, authors: &[&str], venue: &str, cited: &[&str]) -> PaperRecord {
        PaperRecord {
            paper_id: id.into(),
            title: format!("title {id}"),
            year,
            authors: authors.iter().map(|s| s.to_string()).collect(),
            venue: venue.into(),
            cited: cited.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let r = rec("p1", 2003, &["x", "y"], "v", &["p0"]);
        let mut text = serde_json::to_string(&r).unwrap();
        text.push_str("\n\n{\"paper_id\": \"p2\", \"year\": 2004, \"authors\": []}\n");
        text.push_str("not json\n");
        text.push_str("{\"paper_id\": \"p1\", \"year\": 2005, \"authors\": [\"z\"]}\n");
        text.push_str("{\"paper_id\": \"p3\", \"year\": 2005, \"authors\": [\"z\"]}\n");
        let parsed = parse_records(text.as_bytes()).unwrap();
        assert_eq!(parsed.records.len(), 2);
        assert_eq!(parsed.records[0], r);
        assert_eq!(parsed.records[1].venue, "");
        let lines: Vec<usize> = parsed.errors.iter().map(|e| e.line).collect();
        assert_eq!(lines, [3, 4, 5]);
        assert!(parsed.errors[2].reason.contains("duplicate"));
    }

    #[test]
    fn coauthor_arcs_follow_author_order() {
        let g = build_coauthor_network(&[rec("p", 2000, &["X", "Y", "Z"], "", &[])]).unwrap();
        let arcs: Vec<(&str, &str)> = g
            .edges()
            .iter()
            .map(|e| (g.node_id(e.source).as_str(), g.node_id(e.target).as_str()))
            .collect();
        assert_eq!(arcs, [("X", "Y"), ("X", "Z"), ("Y", "Z")]);
        assert!(g.edges().iter().all(|e| g.relation(e.id) == Some(REL_COAUTHOR)));
    }

    #[test]
    fn sole_author_loop_and_repeat_pairs() {
        let g = build_coauthor_network(&[
            rec("a", 2000, &["X"], "", &[]),
            rec("b", 2000, &["X", "Y"], "", &[]),
            rec("c", 2001, &["X", "Y", "X"], "", &[]),
        ])
        .unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges()[0].is_loop());
        let (e1, e2) = (g.edges()[1], g.edges()[2]);
        assert_eq!((e1.source, e1.target), (e2.source, e2.target));
        assert!((crate::backbone::cooperation_density(&g) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn citation_chain_is_dag() {
        let recs = [
            rec("p1", 2000, &["a"], "", &[]),
            rec("p2", 2001, &["a"], "", &["p1"]),
            rec("p3", 2002, &["a"], "", &["p2"]),
        ];
        let net = build_citation_network(&recs, CitationMode::Strict).unwrap();
        assert_eq!(net.graph.edge_count(), 2);
        assert!(net.dropped.is_empty());
    }

    #[test]
    fn citation_cycle_detection() {
        let recs = [
            rec("p1", 2000, &["a"], "", &["p2"]),
            rec("p2", 2000, &["a"], "", &["p1"]),
        ];
        match build_citation_network(&recs, CitationMode::Strict) {
            Err(Error::CitationCycle(c)) => assert_eq!(c, ["p1", "p2"]),
            other => panic!("unexpected {other:?}"),
        }
        let net = build_citation_network(&recs, CitationMode::Lenient).unwrap();
        assert_eq!(net.graph.edge_count(), 1);
        assert_eq!(net.dropped.len(), 1);
    }

    #[test]
    fn later_year_citation() {
        let recs = [
            rec("p1", 2000, &["a"], "", &["p2"]),
            rec("p2", 2001, &["a"], "", &[]),
        ];
        assert!(matches!(
            build_citation_network(&recs, CitationMode::Strict),
            Err(Error::LaterYearCitation { .. })
        ));
        let net = build_citation_network(&recs, CitationMode::Lenient).unwrap();
        assert_eq!(net.graph.edge_count(), 0);
        assert_eq!(net.dropped.len(), 1);
    }

    #[test]
    fn dangling_citations_are_counted() {
        let recs = [
            rec("p1", 2000, &["a"], "", &["x1"]),
            rec("p2", 2001, &["a"], "", &["p1"]),
            rec("p3", 2002, &["a"], "", &["p1", "p2"]),
            rec("p4", 2002, &["a"], "", &["x2"]),
            rec("p5", 2003, &["a"], "", &[]),
        ];
        let net = build_citation_network(&recs, CitationMode::Strict).unwrap();
        assert_eq!((net.graph.node_count(), net.graph.edge_count(), net.dangling), (5, 3, 2));
    }

    #[test]
    fn heterogeneous_counts() {
        let net = build_heterogeneous_network(&[rec("p", 2000, &["x", "y"], "v", &[])]).unwrap();
        assert_eq!(net.graph.node_count(), 4);
        let count = |rel: &str| {
            net.graph
                .edges()
                .iter()
                .filter(|e| net.graph.relation(e.id) == Some(rel))
                .count()
        };
        assert_eq!(count(REL_AUTHOR_OF), 2);
        assert_eq!(count(REL_COAUTHOR), 1);
        assert_eq!(count(REL_PUBLISHED_IN), 1);
        assert_eq!(count(REL_CITE), 0);
        let mut kinds = net.kinds.clone();
        kinds.sort();
        assert_eq!(kinds, [NodeKind::Researcher, NodeKind::Researcher, NodeKind::Paper, NodeKind::Venue]);
    }

    #[test]
    fn cite_weight_raises_citing_and_cited_temps() {
        let recs = [
            rec("p1", 2000, &["a", "b"], "v", &[]),
            rec("p2", 2001, &["b"], "v", &["p1", "zz"]),
            rec("p3", 2001, &["c"], "w", &[]),
        ];
        let net = build_heterogeneous_network(&recs).unwrap();
        assert_eq!(net.dangling, 1);
        let g = &net.graph;
        let weights = |cite: f64| {
            let w: BTreeMap<String, f64> = [REL_AUTHOR_OF, REL_COAUTHOR, REL_PUBLISHED_IN]
                .iter()
                .map(|r| (r.to_string(), 1.0))
                .chain([(REL_CITE.to_string(), cite)])
                .collect();
            let cfg = TcConfig::default().with_relation_weights(w);
            node_temps(g, &TcState::initial(g), &cfg).unwrap()
        };
        let (lo, hi) = (weights(1.0), weights(3.0));
        for v in 0..g.node_count() {
            let id = g.node_id(v).as_str();
            if id == "paper:p1" || id == "paper:p2" {
                assert!(hi[v] > lo[v], "{id}");
            } else {
                assert_eq!(hi[v], lo[v], "{id}");
            }
        }
    }

    #[test]
    fn census_by_author_count() {
        let recs = [
            rec("a", 2000, &["x"], "", &[]),
            rec("b", 2000, &["x", "y"], "", &[]),
            rec("c", 2000, &["x", "y", "z"], "", &[]),
            rec("d", 2000, &["p", "q", "r", "s", "t"], "", &[]),
        ];
        let c = motif_census(&recs);
        assert_eq!((c.loops, c.edges, c.triangles), (1, 1, 1));
        assert_eq!(c.cliques, BTreeMap::from([(5, 1)]));
        assert_eq!(c.total(), 4);
        assert_eq!(motif_census(&[]).total(), 0);
    }

    #[test]
    fn snapshots_accumulate_by_year() {
        let recs = [
            rec("b", 2002, &["y", "z"], "", &[]),
            rec("a", 2001, &["x", "y"], "", &[]),
            rec("c", 2002, &["x"], "", &[]),
        ];
        let snaps = cumulative_snapshots(&recs, build_coauthor_network).unwrap();
        let labels: Vec<&str> = snaps.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["2001", "2002"]);
        assert_eq!((snaps[0].1.node_count(), snaps[0].1.edge_count()), (2, 1));
        assert_eq!((snaps[1].1.node_count(), snaps[1].1.edge_count()), (3, 3));
    }
}
