//! Role-based community discovery.
//!
//! Global discovery seeds one community per core node and attaches every
//! non-core node to each of its nearest cores (so bridges end up in several
//! communities), then merges communities down to a target count. Local
//! discovery grows a community outward from a core along strictly
//! decreasing TC.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::roles::{compare_tc, RoleMap};
use crate::tc::{TcResult, DEFAULT_TIE_EPS};

/// How expansion treats core nodes it meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdmissionMode {
    /// Never admit another core node.
    Literal,
    /// Admit any unseen neighbor with strictly lower TC, cores included.
    #[default]
    Trace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Community {
    /// Seed cores, ascending. Empty for degenerate communities.
    pub seeds: Vec<usize>,
    /// Member node indices, ascending.
    pub members: Vec<usize>,
    pub internal_links: Vec<EdgeId>,
    pub degenerate: bool,
    pub note: Option<String>,
}

impl Community {
    fn key<'g>(&self, g: &'g Graph) -> Vec<&'g NodeId> {
        if self.seeds.is_empty() {
            self.members.first().map(|&v| g.node_id(v)).into_iter().collect()
        } else {
            self.seeds.iter().map(|&v| g.node_id(v)).collect()
        }
    }

    /// Seed ids joined with `+`; degenerate communities are named `~<min member>`.
    pub fn label(&self, g: &Graph) -> String {
        if self.seeds.is_empty() {
            format!("~{}", self.members.first().map_or(String::new(), |&v| g.node_id(v).to_string()))
        } else {
            self.seeds
                .iter()
                .map(|&v| g.node_id(v).as_str())
                .collect::<Vec<_>>()
                .join("+")
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct CommunitySet {
    pub communities: Vec<Community>,
    pub k_target: Option<usize>,
    pub warnings: Vec<String>,
}

/// Edges with both endpoints in `members` (which must be sorted).
fn induced_links(g: &Graph, members: &[usize]) -> Vec<EdgeId> {
    g.edges()
        .iter()
        .filter(|e| members.binary_search(&e.source).is_ok() && members.binary_search(&e.target).is_ok())
        .map(|e| e.id)
        .collect()
}

/// Core nodes at minimal hop distance from `v` (direction ignored). A core
/// node is its own nearest core. Empty when no core is reachable.
pub fn nearest_cores(g: &Graph, roles: &RoleMap, v: usize) -> Vec<usize> {
    if roles.is_core(v) {
        return vec![v];
    }
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    let mut found = Vec::new();
    let mut found_at = usize::MAX;
    while let Some(x) = queue.pop_front() {
        if dist[x] > found_at {
            break;
        }
        if roles.is_core(x) {
            found_at = dist[x];
            found.push(x);
            continue;
        }
        for y in g.neighbor_indices(x, Default::default()) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    found.sort_unstable();
    found
}

/// Seed a community per core, attach each non-core node to all of its
/// nearest cores, then merge down to `k` communities.
pub fn find_k_communities(g: &Graph, roles: &RoleMap, k: usize) -> Result<CommunitySet> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be >= 1".into()));
    }
    let cores = roles.cores();
    let mut members: Vec<BTreeSet<usize>> = cores.iter().map(|&c| BTreeSet::from([c])).collect();
    let slot = |c: usize| cores.binary_search(&c).expect("nearest core is a core");
    let mut orphans = BTreeSet::new();
    for x in 0..g.node_count() {
        if roles.is_core(x) || g.distinct_neighbors(x).is_empty() {
            continue;
        }
        let cand = nearest_cores(g, roles, x);
        if cand.is_empty() {
            orphans.insert(x);
        }
        for c in cand {
            members[slot(c)].insert(x);
        }
    }

    let mut set = CommunitySet {
        k_target: Some(k),
        ..CommunitySet::default()
    };
    for (i, m) in members.into_iter().enumerate() {
        let members: Vec<usize> = m.into_iter().collect();
        set.communities.push(Community {
            seeds: vec![cores[i]],
            internal_links: induced_links(g, &members),
            members,
            degenerate: false,
            note: None,
        });
    }

    if !orphans.is_empty() {
        let labels = g.component_labels();
        let mut by_comp: Vec<(usize, Vec<usize>)> = Vec::new();
        for &x in &orphans {
            match by_comp.iter_mut().find(|(c, _)| *c == labels[x]) {
                Some((_, v)) => v.push(x),
                None => by_comp.push((labels[x], vec![x])),
            }
        }
        for (_, members) in by_comp {
            let c = Community {
                seeds: Vec::new(),
                internal_links: induced_links(g, &members),
                members,
                degenerate: true,
                note: Some("no core node reachable".into()),
            };
            set.warnings.push(format!(
                "community {} has no reachable core node",
                c.label(g)
            ));
            set.communities.push(c);
        }
    }

    if k > cores.len() {
        set.warnings.push(format!(
            "k = {k} exceeds the number of core nodes ({}); communities are not split",
            cores.len()
        ));
    }
    sort_communities(g, &mut set.communities);
    Ok(merge_communities(g, set, k))
}

fn sort_communities(g: &Graph, cs: &mut [Community]) {
    cs.sort_by(|a, b| a.key(g).cmp(&b.key(g)));
}

fn jaccard(a: &[usize], b: &[usize]) -> f64 {
    let (mut i, mut j, mut inter) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

fn external_links(g: &Graph, a: &Community, b: &Community) -> usize {
    g.edges()
        .iter()
        .filter(|e| {
            !e.is_loop()
                && ((a.contains(e.source) && b.contains(e.target))
                    || (b.contains(e.source) && a.contains(e.target)))
        })
        .count()
}

/// Largest-scoring pair, ties to the earliest pair in list order (which is
/// label order).
fn best_pair<F: Fn(&Community, &Community) -> f64>(cs: &[Community], score: F) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let s = score(&cs[i], &cs[j]);
            if best.is_none_or(|(_, _, b)| s > b) {
                best = Some((i, j, s));
            }
        }
    }
    best
}

/// Merge until at most `k` communities remain: first the pair with the
/// largest Jaccard similarity of member sets, or, when every pair is
/// disjoint, the pair joined by the most external links. Stops early when
/// both criteria are zero everywhere.
pub fn merge_communities(g: &Graph, mut cs: CommunitySet, k: usize) -> CommunitySet {
    sort_communities(g, &mut cs.communities);
    while cs.communities.len() > k {
        let pair = match best_pair(&cs.communities, |a, b| jaccard(&a.members, &b.members)) {
            Some(p) if p.2 > 0.0 => Some(p),
            _ => best_pair(&cs.communities, |a, b| external_links(g, a, b) as f64)
                .filter(|p| p.2 > 0.0),
        };
        let Some((i, j, _)) = pair else {
            cs.warnings.push(format!(
                "merging stopped at {} communities: remaining communities share no nodes or links",
                cs.communities.len()
            ));
            break;
        };
        let b = cs.communities.remove(j);
        let a = cs.communities.remove(i);
        let members: Vec<usize> = a
            .members
            .iter()
            .chain(&b.members)
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let seeds: Vec<usize> = a
            .seeds
            .iter()
            .chain(&b.seeds)
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        cs.communities.push(Community {
            seeds,
            internal_links: induced_links(g, &members),
            members,
            degenerate: a.degenerate && b.degenerate,
            note: None,
        });
        sort_communities(g, &mut cs.communities);
    }
    cs
}

/// One row of an expansion trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionStep {
    /// Node fetched from the queue.
    pub node: usize,
    /// Queue contents right after the fetch.
    pub queue: Vec<usize>,
    /// Seed, pre-seeded nodes and every node fetched so far, in that order.
    pub fetched: Vec<usize>,
    /// Neighbors admitted while processing `node`, in id order.
    pub expanded: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub community: Community,
    pub trace: Vec<ExpansionStep>,
}

/// FIFO expansion from `start`. A neighbor `y` of the fetched node `x` is
/// admitted when it is unseen, has strictly lower TC than `x`, and (in
/// literal mode) is not core. `preseed` nodes count as seen members from the
/// start but are never fetched.
fn expand(
    g: &Graph,
    tc: &TcResult,
    roles: &RoleMap,
    start: usize,
    preseed: &[usize],
    mode: AdmissionMode,
) -> Expansion {
    let w = tc.node_weights();
    let mut seen = vec![false; g.node_count()];
    seen[start] = true;
    let mut fetched = vec![start];
    for &p in preseed {
        if !seen[p] {
            seen[p] = true;
            fetched.push(p);
        }
    }
    let mut queue = VecDeque::from([start]);
    let mut links = BTreeSet::new();
    let mut trace = Vec::new();
    let mut first = true;
    while let Some(x) = queue.pop_front() {
        if !first {
            fetched.push(x);
        }
        first = false;
        let queue_after: Vec<usize> = queue.iter().copied().collect();
        let mut expanded = Vec::new();
        for y in g.distinct_neighbors(x) {
            if seen[y] || compare_tc(w[y], w[x], DEFAULT_TIE_EPS) != Ordering::Less {
                continue;
            }
            if mode == AdmissionMode::Literal && roles.is_core(y) {
                continue;
            }
            seen[y] = true;
            queue.push_back(y);
            expanded.push(y);
            links.extend(
                g.incident(x)
                    .iter()
                    .filter(|inc| inc.neighbor == y)
                    .map(|inc| inc.edge),
            );
        }
        trace.push(ExpansionStep {
            node: x,
            queue: queue_after,
            fetched: fetched.clone(),
            expanded,
        });
    }
    let members: Vec<usize> = (0..g.node_count()).filter(|&v| seen[v]).collect();
    Expansion {
        community: Community {
            seeds: vec![start],
            members,
            internal_links: links.into_iter().collect(),
            degenerate: false,
            note: None,
        },
        trace,
    }
}

/// Local community grown from core node `c`. Non-core seeds are rejected
/// unless `force` is set.
pub fn expand_from_core(
    g: &Graph,
    tc: &TcResult,
    roles: &RoleMap,
    c: usize,
    mode: AdmissionMode,
    force: bool,
) -> Result<Expansion> {
    if !force && !roles.is_core(c) {
        return Err(Error::NotCore(g.node_id(c).to_string()));
    }
    Ok(expand(g, tc, roles, c, &[], mode))
}

/// Local communities of a non-core node: one expansion from each of its
/// nearest cores, each containing `v`.
pub fn local_community_of_node(
    g: &Graph,
    tc: &TcResult,
    roles: &RoleMap,
    v: usize,
    mode: AdmissionMode,
) -> Vec<Expansion> {
    if roles.is_core(v) {
        return vec![expand(g, tc, roles, v, &[], mode)];
    }
    let cores = nearest_cores(g, roles, v);
    if cores.is_empty() {
        return vec![Expansion {
            community: Community {
                seeds: Vec::new(),
                members: vec![v],
                internal_links: Vec::new(),
                degenerate: true,
                note: Some("no core node reachable".into()),
            },
            trace: Vec::new(),
        }];
    }
    cores
        .into_iter()
        .map(|c| expand(g, tc, roles, c, &[v], mode))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SetCommunity {
    pub expansion: Expansion,
    /// Cores (and reached centers) collected while climbing from each seed.
    pub core_set: Vec<usize>,
    /// The core the returned expansion was grown from.
    pub chosen: usize,
    /// Seeds missing from the returned community.
    pub uncovered: Vec<usize>,
}

/// Walk from `s` to ever higher TC (highest neighbor, smallest index on
/// ties) until a topological center or a local maximum, collecting the
/// cores passed and the center reached.
fn ascend(g: &Graph, tc: &TcResult, roles: &RoleMap, s: usize, out: &mut BTreeSet<usize>) {
    let w = tc.node_weights();
    let mut cur = s;
    loop {
        if roles.is_core(cur) {
            out.insert(cur);
        }
        if w[cur] >= 1.0 - DEFAULT_TIE_EPS {
            out.insert(cur);
            return;
        }
        let next = g
            .distinct_neighbors(cur)
            .into_iter()
            .filter(|&y| compare_tc(w[y], w[cur], DEFAULT_TIE_EPS) == Ordering::Greater)
            .fold(None::<usize>, |best, y| match best {
                Some(b) if w[b] >= w[y] => Some(b),
                _ => Some(y),
            });
        match next {
            Some(n) => cur = n,
            None => return,
        }
    }
}

/// Local community containing every node of `seeds`.
///
/// Each seed climbs the TC gradient to its center, collecting cores. The
/// candidates are then ranked by their largest hop distance to a seed inside
/// the subgraph induced by seeds and candidates (higher TC, then smaller id,
/// breaks ties). The first candidate whose expansion covers all seeds wins;
/// if none does, the expansion covering the most seeds is returned with the
/// rest flagged.
pub fn local_community_of_set(
    g: &Graph,
    tc: &TcResult,
    roles: &RoleMap,
    seeds: &[usize],
    mode: AdmissionMode,
) -> Result<SetCommunity> {
    let mut seeds: Vec<usize> = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    let Some(&first) = seeds.first() else {
        return Err(Error::InvalidConfig("seed set is empty".into()));
    };
    let labels = g.component_labels();
    if let Some(&s) = seeds.iter().find(|&&s| labels[s] != labels[first]) {
        return Err(Error::InvalidConfig(format!(
            "seed `{}` is not in the same component as `{}`",
            g.node_id(s),
            g.node_id(first)
        )));
    }

    let mut core_set = BTreeSet::new();
    for &s in &seeds {
        ascend(g, tc, roles, s, &mut core_set);
    }
    let core_set: Vec<usize> = core_set.into_iter().collect();

    let keep: Vec<usize> = seeds
        .iter()
        .chain(&core_set)
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let (sub, _) = g.induced_subgraph_ix(&keep);
    let to_sub = |v: usize| keep.binary_search(&v).expect("kept node");
    let seed_dists: Vec<Vec<Option<usize>>> = seeds
        .iter()
        .map(|&s| sub.bfs_from(to_sub(s), Default::default()))
        .collect();
    let reach = |c: usize| -> usize {
        seed_dists
            .iter()
            .map(|d| d[to_sub(c)].unwrap_or(usize::MAX))
            .max()
            .unwrap_or(0)
    };

    let w = tc.node_weights();
    let mut candidates = core_set.clone();
    candidates.sort_by(|&a, &b| {
        reach(a)
            .cmp(&reach(b))
            .then_with(|| compare_tc(w[b], w[a], DEFAULT_TIE_EPS))
            .then(a.cmp(&b))
    });

    let mut best: Option<(usize, Expansion)> = None;
    for &c in &candidates {
        let exp = expand(g, tc, roles, c, &[], mode);
        let covered = seeds.iter().filter(|&&s| exp.community.contains(s)).count();
        if covered == seeds.len() {
            return Ok(SetCommunity {
                expansion: exp,
                core_set,
                chosen: c,
                uncovered: Vec::new(),
            });
        }
        if best.as_ref().is_none_or(|(b, _)| covered > *b) {
            best = Some((covered, exp));
        }
    }
    let (_, exp) = best.ok_or_else(|| Error::InvalidConfig("no candidate core found for seed set".into()))?;
    let uncovered = seeds
        .iter()
        .copied()
        .filter(|&s| !exp.community.contains(s))
        .collect();
    let chosen = exp.community.seeds[0];
    Ok(SetCommunity {
        expansion: exp,
        core_set,
        chosen,
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture_expansion, fixture_tree16, generate, Family, GeneratorSpec};
    use crate::graph::build_graph;
    use crate::roles::{classify_roles, RoleConfig};
    use crate::tc::{compute_tc, TcConfig};

    fn ix(g: &Graph, id: &str) -> usize {
        g.require(&id.into()).unwrap()
    }

    fn names(g: &Graph, v: &[usize]) -> Vec<String> {
        v.iter().map(|&i| g.node_id(i).to_string()).collect()
    }

    fn tree() -> (Graph, TcResult, RoleMap) {
        let g = fixture_tree16();
        let tc = compute_tc(&g, &TcConfig::default()).unwrap();
        let roles = classify_roles(&g, &tc, &RoleConfig::default()).unwrap();
        (g, tc, roles)
    }

    fn expansion_fixture() -> (Graph, TcResult, RoleMap) {
        let (g, tc) = fixture_expansion();
        let roles = classify_roles(&g, &tc, &RoleConfig::default()).unwrap();
        (g, tc, roles)
    }

    #[test]
    fn nearest_cores_on_tree() {
        let (g, _, roles) = tree();
        assert_eq!(names(&g, &nearest_cores(&g, &roles, ix(&g, "9"))), ["2"]);
        assert_eq!(names(&g, &nearest_cores(&g, &roles, ix(&g, "7"))), ["1", "2"]);
        assert_eq!(names(&g, &nearest_cores(&g, &roles, ix(&g, "3"))), ["3"]);
    }

    #[test]
    fn three_communities_on_tree() {
        let (g, _, roles) = tree();
        let cs = find_k_communities(&g, &roles, 3).unwrap();
        let got: Vec<Vec<String>> = cs.communities.iter().map(|c| names(&g, &c.members)).collect();
        assert_eq!(
            got,
            vec![
                vec!["1", "4", "5", "6", "7", "8"],
                vec!["2", "7", "9", "10", "11", "12"],
                vec!["3", "12", "13", "14", "15", "16"],
            ]
        );
        assert!(cs.warnings.is_empty());
        for c in &cs.communities {
            for &e in &c.internal_links {
                let edge = g.edge(e);
                assert!(c.contains(edge.source) && c.contains(edge.target));
            }
        }
        assert_eq!(cs.communities[0].internal_links.len(), 5);
    }

    #[test]
    fn one_community_on_tree() {
        let (g, _, roles) = tree();
        let cs = find_k_communities(&g, &roles, 1).unwrap();
        assert_eq!(cs.communities.len(), 1);
        assert_eq!(cs.communities[0].members.len(), 16);
        assert_eq!(cs.communities[0].label(&g), "1+2+3");
    }

    #[test]
    fn k_larger_than_cores_is_flagged() {
        let (g, _, roles) = tree();
        let cs = find_k_communities(&g, &roles, 5).unwrap();
        assert_eq!(cs.communities.len(), 3);
        assert_eq!(cs.warnings.len(), 1);
        assert!(find_k_communities(&g, &roles, 0).is_err());
    }

    #[test]
    fn star_is_one_community() {
        let g = generate(&GeneratorSpec::new(Family::Star { n: 6 })).unwrap();
        let tc = compute_tc(&g, &TcConfig::default()).unwrap();
        let roles = classify_roles(&g, &tc, &RoleConfig::default()).unwrap();
        for k in [1, 2, 4] {
            let cs = find_k_communities(&g, &roles, k).unwrap();
            assert_eq!(cs.communities.len(), 1);
            assert_eq!(cs.communities[0].members.len(), 6);
        }
    }

    fn community(g: &Graph, seed: &str, members: &[&str]) -> Community {
        let mut m: Vec<usize> = members.iter().map(|s| ix(g, s)).collect();
        m.sort_unstable();
        Community {
            seeds: vec![ix(g, seed)],
            internal_links: induced_links(g, &m),
            members: m,
            degenerate: false,
            note: None,
        }
    }

    #[test]
    fn merge_prefers_jaccard() {
        let g = build_graph(["1", "2", "3", "4", "9"], [("1", "2")], false).unwrap();
        let cs = CommunitySet {
            communities: vec![
                community(&g, "1", &["1", "2", "3"]),
                community(&g, "4", &["2", "3", "4"]),
                community(&g, "9", &["9"]),
            ],
            ..CommunitySet::default()
        };
        let merged = merge_communities(&g, cs, 2);
        let got: Vec<String> = merged.communities.iter().map(|c| c.label(&g)).collect();
        assert_eq!(got, ["1+4", "9"]);
    }

    #[test]
    fn merge_falls_back_to_external_links() {
        let g = build_graph(
            ["a1", "a2", "b1", "b2", "c1"],
            [("a1", "b1"), ("a2", "b2"), ("a1", "b2"), ("a2", "c1")],
            false,
        )
        .unwrap();
        let cs = CommunitySet {
            communities: vec![
                community(&g, "a1", &["a1", "a2"]),
                community(&g, "b1", &["b1", "b2"]),
                community(&g, "c1", &["c1"]),
            ],
            ..CommunitySet::default()
        };
        let merged = merge_communities(&g, cs, 2);
        let got: Vec<String> = merged.communities.iter().map(|c| c.label(&g)).collect();
        assert_eq!(got, ["a1+b1", "c1"]);
    }

    #[test]
    fn merge_stops_when_nothing_connects() {
        let g = build_graph(["a", "b"], Vec::new(), false).unwrap();
        let cs = CommunitySet {
            communities: vec![community(&g, "a", &["a"]), community(&g, "b", &["b"])],
            ..CommunitySet::default()
        };
        let merged = merge_communities(&g, cs, 1);
        assert_eq!(merged.communities.len(), 2);
        assert_eq!(merged.warnings.len(), 1);
    }

    #[test]
    fn identical_sets_merge_first() {
        let g = build_graph(["a", "b", "c"], [("a", "b")], false).unwrap();
        let cs = CommunitySet {
            communities: vec![
                community(&g, "a", &["a", "b"]),
                community(&g, "b", &["b", "c"]),
                community(&g, "c", &["a", "b"]),
            ],
            ..CommunitySet::default()
        };
        let merged = merge_communities(&g, cs, 2);
        let got: Vec<String> = merged.communities.iter().map(|c| c.label(&g)).collect();
        assert_eq!(got, ["a+c", "b"]);
    }

    #[test]
    fn expansion_from_b_in_both_modes() {
        let (g, tc, roles) = expansion_fixture();
        let b = ix(&g, "B");
        let trace = expand_from_core(&g, &tc, &roles, b, AdmissionMode::Trace, false).unwrap();
        assert_eq!(
            names(&g, &trace.community.members),
            ["B", "C", "D", "E", "F", "G", "H", "I", "J"]
        );
        let lit = expand_from_core(&g, &tc, &roles, b, AdmissionMode::Literal, false).unwrap();
        assert_eq!(names(&g, &lit.community.members), ["B", "C"]);
        let c = ix(&g, "C");
        assert!(matches!(
            expand_from_core(&g, &tc, &roles, c, AdmissionMode::Trace, false),
            Err(Error::NotCore(_))
        ));
    }

    #[test]
    fn expansion_without_lower_neighbors_is_singleton() {
        let (g, tc, roles) = expansion_fixture();
        let j = ix(&g, "J");
        let e = expand_from_core(&g, &tc, &roles, j, AdmissionMode::Trace, true).unwrap();
        assert_eq!(e.community.members, vec![j]);
        assert_eq!(e.trace.len(), 1);
    }

    #[test]
    fn tree_expansion_from_hub() {
        let (g, tc, roles) = tree();
        for mode in [AdmissionMode::Trace, AdmissionMode::Literal] {
            let e = expand_from_core(&g, &tc, &roles, ix(&g, "1"), mode, false).unwrap();
            assert_eq!(names(&g, &e.community.members), ["1", "4", "5", "6", "8"]);
        }
    }

    #[test]
    fn local_community_of_leaf() {
        let (g, tc, roles) = tree();
        let out = local_community_of_node(&g, &tc, &roles, ix(&g, "9"), AdmissionMode::Trace);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].community.seeds, vec![ix(&g, "2")]);
        assert!(out[0].community.contains(ix(&g, "9")));
    }

    #[test]
    fn local_community_with_tied_cores() {
        let (g, tc, roles) = tree();
        let out = local_community_of_node(&g, &tc, &roles, ix(&g, "7"), AdmissionMode::Trace);
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|e| e.community.contains(ix(&g, "7"))));
    }

    #[test]
    fn local_community_without_core_is_degenerate() {
        let g = build_graph(["u", "v"], [("u", "v")], false).unwrap();
        let tc = compute_tc(&g, &TcConfig::default()).unwrap();
        let roles = classify_roles(&g, &tc, &RoleConfig::default()).unwrap();
        let out = local_community_of_node(&g, &tc, &roles, 0, AdmissionMode::Trace);
        assert!(out[0].community.degenerate);
        assert_eq!(out[0].community.members, vec![0]);
    }

    #[test]
    fn seed_set_single_core() {
        let (g, tc, roles) = expansion_fixture();
        let d = ix(&g, "D");
        let r = local_community_of_set(&g, &tc, &roles, &[d], AdmissionMode::Trace).unwrap();
        assert_eq!(r.chosen, d);
        assert_eq!(names(&g, &r.expansion.community.members), ["D", "F", "G", "H"]);
    }

    #[test]
    fn seed_set_inside_one_expansion() {
        let (g, tc, roles) = expansion_fixture();
        let seeds = [ix(&g, "F"), ix(&g, "G")];
        let r = local_community_of_set(&g, &tc, &roles, &seeds, AdmissionMode::Trace).unwrap();
        assert_eq!(g.node_id(r.chosen).as_str(), "D");
        assert!(r.uncovered.is_empty());
    }

    #[test]
    fn seed_set_validation() {
        let (g, tc, roles) = expansion_fixture();
        assert!(local_community_of_set(&g, &tc, &roles, &[], AdmissionMode::Trace).is_err());
        let g2 = build_graph([1, 2, 3], [(1, 2)], false).unwrap();
        let tc2 = compute_tc(&g2, &TcConfig::default()).unwrap();
        let roles2 = classify_roles(&g2, &tc2, &RoleConfig::default()).unwrap();
        assert!(local_community_of_set(&g2, &tc2, &roles2, &[0, 2], AdmissionMode::Trace).is_err());
    }

    #[test]
    fn seed_set_literal_mode_flags_uncovered() {
        let (g, tc, roles) = expansion_fixture();
        let seeds = [ix(&g, "D"), ix(&g, "I"), ix(&g, "J")];
        let r = local_community_of_set(&g, &tc, &roles, &seeds, AdmissionMode::Literal).unwrap();
        assert!(!r.uncovered.is_empty());
    }
}
