//! Text formats: edge lists in, CSV / JSON / DOT out.
//!
//! Edge-list lines are `source target [weight [relation]]`, separated by
//! tabs or spaces. A line with a single token declares a node without
//! edges. `#` starts a comment line. Ids containing whitespace, `%` or `#`
//! are percent-escaped.

use std::io::BufRead;

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, CONTROLS};
use serde::Serialize;

use crate::backbone::EvolutionSeries;
use crate::centrality::CentralityReport;
use crate::community::{CommunitySet, Expansion};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, NodeId};
use crate::research::NodeKind;
use crate::roles::RoleMap;
use crate::tc::{log_tc, TcResult};

const ID_ESCAPES: &AsciiSet = &CONTROLS.add(b' ').add(b'%').add(b'#');

pub fn escape_id(id: &str) -> String {
    utf8_percent_encode(id, ID_ESCAPES).to_string()
}

pub fn unescape_id(token: &str) -> Result<String> {
    percent_decode_str(token)
        .decode_utf8()
        .map(|s| s.into_owned())
        .map_err(|e| Error::Parse {
            line: 0,
            reason: format!("bad escape in `{token}`: {e}"),
        })
}

pub fn read_edge_list<R: BufRead>(input: R, directed: bool) -> Result<Graph> {
    let mut b = GraphBuilder::new(directed);
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |reason: String| Error::Parse { line: n, reason };
        let id = |t: &str| {
            unescape_id(t).map_err(|e| match e {
                Error::Parse { reason, .. } => parse_err(reason),
                other => other,
            })
        };
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            [v] => {
                b.add_node(id(v)?);
            }
            [u, v] => {
                b.add_edge(id(u)?, id(v)?);
            }
            [u, v, w, rest @ ..] if rest.len() <= 1 => {
                let w: f64 = w
                    .parse()
                    .map_err(|_| parse_err(format!("weight `{w}` is not a number")))?;
                if !(w.is_finite() && w >= 0.0) {
                    return Err(parse_err(format!("weight {w} must be finite and non-negative")));
                }
                match rest.first() {
                    Some(r) => b.add_relation_edge(id(u)?, id(v)?, w, id(r)?),
                    None => b.add_weighted_edge(id(u)?, id(v)?, w),
                };
            }
            _ => return Err(parse_err(format!("expected 1 to 4 fields, found {}", tokens.len()))),
        }
    }
    b.build()
}

/// Nodes without incident edges first, then one line per edge in edge order.
/// Weights are written only when some edge is not unit weight or carries a
/// relation.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for v in 0..g.node_count() {
        if g.incident(v).is_empty() {
            out.push_str(&escape_id(g.node_id(v).as_str()));
            out.push('\n');
        }
    }
    let full = g.has_relations() || g.edge_weights().iter().any(|&w| w != 1.0);
    for e in g.edges() {
        out.push_str(&escape_id(g.node_id(e.source).as_str()));
        out.push('\t');
        out.push_str(&escape_id(g.node_id(e.target).as_str()));
        if full {
            out.push('\t');
            out.push_str(&g.edge_weights()[e.id.0].to_string());
            if let Some(r) = g.relation(e.id) {
                out.push('\t');
                out.push_str(&escape_id(r));
            }
        }
        out.push('\n');
    }
    out
}

fn csv_string<T: Serialize>(header: &[&str], rows: impl IntoIterator<Item = T>) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

pub fn tc_nodes_csv(g: &Graph, tc: &TcResult) -> String {
    let logs = log_tc(tc);
    csv_string(
        &["node", "tc", "log_tc"],
        (0..g.node_count()).map(|v| (g.node_id(v).as_str(), tc.node_weights()[v], logs[v])),
    )
}

pub fn tc_edges_csv(g: &Graph, tc: &TcResult) -> String {
    csv_string(
        &["edge", "source", "target", "tc"],
        g.edges().iter().map(|e| {
            (
                e.id.0,
                g.node_id(e.source).as_str(),
                g.node_id(e.target).as_str(),
                tc.edge_weights()[e.id.0],
            )
        }),
    )
}

pub fn residuals_csv(tc: &TcResult) -> String {
    csv_string(
        &["iteration", "node_residual", "edge_residual"],
        tc.node_residuals
            .iter()
            .zip(&tc.edge_residuals)
            .enumerate()
            .map(|(i, (n, e))| (i + 1, n, e)),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

/// Equal-width bins over `[min, max]` of the finite values; the last bin is
/// closed on the right.
pub fn histogram(values: &[f64], bins: usize) -> Vec<Bin> {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() || bins == 0 {
        return Vec::new();
    }
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return vec![Bin {
            lower: lo,
            upper: hi,
            count: finite.len(),
        }];
    }
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<Bin> = (0..bins)
        .map(|i| Bin {
            lower: lo + width * i as f64,
            upper: if i + 1 == bins { hi } else { lo + width * (i + 1) as f64 },
            count: 0,
        })
        .collect();
    for v in finite {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        out[i].count += 1;
    }
    out
}

pub fn histogram_csv(bins: &[Bin]) -> String {
    csv_string(
        &["bin_lower", "bin_upper", "count"],
        bins.iter().map(|b| (b.lower, b.upper, b.count)),
    )
}

pub fn centrality_csv(g: &Graph, reports: &[CentralityReport]) -> String {
    csv_string(
        &["node", "measure", "value"],
        reports.iter().flat_map(|r| {
            r.scores
                .iter()
                .enumerate()
                .map(move |(v, &s)| (g.node_id(v).as_str(), r.measure.as_str(), s))
        }),
    )
}

pub fn roles_csv(g: &Graph, tc: &TcResult, roles: &RoleMap) -> String {
    csv_string(
        &["node", "role", "alpha", "beta", "tc"],
        (0..g.node_count()).map(|v| {
            let ev = &roles.evidence[v];
            (
                g.node_id(v).as_str(),
                roles.roles[v].as_str(),
                ev.alpha,
                ev.beta,
                tc.node_weights()[v],
            )
        }),
    )
}

/// One column per named score vector, one row per node.
pub fn node_columns_csv(g: &Graph, columns: &[(&str, &[f64])]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = std::iter::once("node").chain(columns.iter().map(|c| c.0)).collect();
    w.write_record(&header).expect("in-memory write");
    for v in 0..g.node_count() {
        let mut row = vec![g.node_id(v).to_string()];
        row.extend(columns.iter().map(|c| c.1[v].to_string()));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

pub fn node_kinds_csv(g: &Graph, kinds: &[NodeKind]) -> String {
    csv_string(
        &["node", "kind"],
        (0..g.node_count()).map(|v| (g.node_id(v).as_str(), kinds[v])),
    )
}

/// Expansion traces; list columns are `;`-joined node ids.
pub fn trace_csv(g: &Graph, expansions: &[Expansion]) -> String {
    let join = |v: &[usize]| {
        v.iter()
            .map(|&i| g.node_id(i).as_str())
            .collect::<Vec<_>>()
            .join(";")
    };
    csv_string(
        &["community", "step", "node", "queue", "node_set", "expanded"],
        expansions.iter().flat_map(|x| {
            let label = x.community.label(g);
            x.trace.iter().enumerate().map(move |(i, s)| {
                (
                    label.clone(),
                    i,
                    g.node_id(s.node).as_str(),
                    join(&s.queue),
                    join(&s.fetched),
                    join(&s.expanded),
                )
            })
        }),
    )
}

#[derive(Serialize)]
struct CommunityJson<'a> {
    label: String,
    members: Vec<&'a NodeId>,
    /// Edge ids, i.e. zero-based positions in the input edge list.
    internal_links: Vec<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct CommunitySetJson<'a> {
    communities: Vec<CommunityJson<'a>>,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    warnings: &'a [String],
}

pub fn communities_json(g: &Graph, cs: &CommunitySet) -> String {
    let doc = CommunitySetJson {
        communities: cs
            .communities
            .iter()
            .map(|c| CommunityJson {
                label: c.label(g),
                members: c.members.iter().map(|&v| g.node_id(v)).collect(),
                internal_links: c.internal_links.iter().map(|e| e.0).collect(),
                degenerate: c.degenerate,
                note: c.note.as_deref(),
            })
            .collect(),
        warnings: &cs.warnings,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_dot(g: &Graph, name: &str) -> String {
    let (kind, arrow) = if g.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let mut out = format!("{kind} {} {{\n", dot_quote(name));
    for v in g.nodes() {
        out.push_str(&format!("  {};\n", dot_quote(v.as_str())));
    }
    for e in g.edges() {
        out.push_str(&format!(
            "  {} {arrow} {};\n",
            dot_quote(g.node_id(e.source).as_str()),
            dot_quote(g.node_id(e.target).as_str())
        ));
    }
    out.push_str("}\n");
    out
}

/// `Year,#Researcher,#Cooperation,TopologicalCenter` over the largest
/// component of each snapshot; multiple centers are joined by `;`.
pub fn evolution_csv(series: &EvolutionSeries) -> String {
    csv_string(
        &["Year", "#Researcher", "#Cooperation", "TopologicalCenter"],
        series.snapshots.iter().map(|s| {
            (
                s.label.as_str(),
                s.module_nodes,
                s.module_edges,
                s.centers.iter().map(NodeId::as_str).collect::<Vec<_>>().join(";"),
            )
        }),
    )
}
