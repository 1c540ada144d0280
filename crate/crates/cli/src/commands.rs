use std::fs;
use std::io::Read;
use std::path::Path;

use serde_json::json;
use tcnet::backbone::{cooperation_density, density_bounds, evolution_series, extract_backbone};
use tcnet::centrality::{
    betweenness_centrality, closeness_centrality, degree_centrality, hits, information_centrality,
    pagerank, CentralityReport,
};
use tcnet::community::{
    expand_from_core, find_k_communities, local_community_of_node, local_community_of_set,
    CommunitySet, Expansion,
};
use tcnet::generators::{fixture_center_bridge, fixture_expansion, fixture_tree16, generate};
use tcnet::io;
use tcnet::research::{
    build_citation_network, build_coauthor_network, build_heterogeneous_network,
    cumulative_snapshots, motif_census, parse_records, CitationMode, PaperRecord,
};
use tcnet::roles::{classify_roles, RoleMap};
use tcnet::tc::{compute_tc, log_tc, TcResult};
use tcnet::{Graph, NodeId};

use crate::args::*;
use crate::output::{InputDigest, Outputs};
use crate::Failure;

const PAGERANK_TOL: f64 = 1e-12;
const ITERATIVE_MAX: usize = 10_000;

#[derive(Default)]
struct Ctx {
    out: Outputs,
    deferred: Option<Failure>,
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let mut ctx = Ctx::default();
    match &cli.command {
        Command::Generate(a) => cmd_generate(&mut ctx, a)?,
        Command::Tc(a) => cmd_tc(&mut ctx, a)?,
        Command::Centrality(a) => cmd_centrality(&mut ctx, a)?,
        Command::Roles(a) => cmd_roles(&mut ctx, a)?,
        Command::Communities(a) => cmd_communities(&mut ctx, a)?,
        Command::Backbone(a) => cmd_backbone(&mut ctx, a)?,
        Command::Evolve(a) => cmd_evolve(&mut ctx, a, cli.out_dir.is_some())?,
        Command::Ingest(a) => cmd_ingest(&mut ctx, a, cli.out_dir.is_some())?,
        Command::Fixtures(a) => cmd_fixtures(&mut ctx, a)?,
        Command::Table2 => cmd_table2(&mut ctx)?,
    }
    ctx.out.emit(&cli.command, cli.out_dir.as_deref())?;
    match ctx.deferred {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn read_source(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut bytes = Vec::new();
    if path.as_os_str() == "-" {
        std::io::stdin().lock().read_to_end(&mut bytes)?;
    } else {
        bytes = fs::read(path)
            .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(bytes)
}

fn source_name(path: &Path) -> String {
    if path.as_os_str() == "-" {
        "stdin".to_string()
    } else {
        path.file_name()
            .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
    }
}

struct Loaded {
    graph: Graph,
    /// Fixed weights that replace computed TC.
    pinned: Option<TcResult>,
}

fn fixture(name: FixtureArg) -> (Graph, Option<TcResult>) {
    match name {
        FixtureArg::Tree16 => (fixture_tree16(), None),
        FixtureArg::Expansion => {
            let (g, tc) = fixture_expansion();
            (g, Some(tc))
        }
        FixtureArg::CenterBridge => (fixture_center_bridge(), None),
    }
}

fn load(ctx: &mut Ctx, input: &InputArgs) -> Result<Loaded, Failure> {
    if let Some(path) = &input.input {
        let bytes = read_source(path)?;
        ctx.out.inputs.push(InputDigest::of(source_name(path), &bytes));
        let graph = io::read_edge_list(&bytes[..], input.directed)?;
        return Ok(Loaded { graph, pinned: None });
    }
    let (graph, pinned, name) = if let Some(family) = input.family {
        (generate(&input.params.spec(family)?)?, None, "generated".to_string())
    } else {
        let name = input.fixture.expect("clap enforces one source");
        let (g, pinned) = fixture(name);
        (g, pinned, format!("fixture:{}", name.to_possible_value_name()))
    };
    ctx.out
        .inputs
        .push(InputDigest::of(name, io::write_edge_list(&graph).as_bytes()));
    Ok(Loaded { graph, pinned })
}

trait PossibleName {
    fn to_possible_value_name(&self) -> String;
}

impl<T: clap::ValueEnum> PossibleName for T {
    fn to_possible_value_name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

fn compute(ctx: &mut Ctx, loaded: &Loaded, args: &TcArgs) -> Result<TcResult, Failure> {
    if let Some(p) = &loaded.pinned {
        eprintln!("note: using the fixture's pinned TC weights");
        return Ok(p.clone());
    }
    let tc = compute_tc(&loaded.graph, &args.config())?;
    if !tc.unweighted_relations.is_empty() {
        eprintln!(
            "warning: no --omega for relations {}; using weight 1",
            tc.unweighted_relations.join(", ")
        );
    }
    if tc.converged {
        eprintln!("converged after {} iteration(s)", tc.iterations());
    } else {
        let msg = format!("TC did not converge within {} iterations", args.max);
        if args.strict {
            ctx.deferred = Some(Failure::NonConvergence(msg));
        } else {
            eprintln!("warning: {msg}");
        }
    }
    Ok(tc)
}

fn roles_for(loaded: &Loaded, tc: &TcResult, args: &RoleArgs) -> Result<RoleMap, Failure> {
    Ok(classify_roles(&loaded.graph, tc, &args.config())?)
}

fn node(g: &Graph, id: &str) -> Result<usize, Failure> {
    Ok(g.require(&NodeId::new(id))?)
}

fn cmd_generate(ctx: &mut Ctx, a: &GenerateArgs) -> Result<(), Failure> {
    let g = generate(&a.params.spec(a.family)?)?;
    ctx.out.add("graph.tsv", io::write_edge_list(&g));
    Ok(())
}

fn cmd_tc(ctx: &mut Ctx, a: &TcCommand) -> Result<(), Failure> {
    let loaded = load(ctx, &a.input)?;
    let tc = compute(ctx, &loaded, &a.tc)?;
    let g = &loaded.graph;
    ctx.out.add("tc_nodes.csv", io::tc_nodes_csv(g, &tc));
    ctx.out.add("tc_edges.csv", io::tc_edges_csv(g, &tc));
    ctx.out.add("residuals.csv", io::residuals_csv(&tc));
    if let Some(bins) = a.histogram {
        if bins == 0 {
            return Err(Failure::Usage("--histogram needs at least one bin".into()));
        }
        ctx.out
            .add("histogram.csv", io::histogram_csv(&io::histogram(&log_tc(&tc), bins)));
    }
    Ok(())
}

fn cmd_centrality(ctx: &mut Ctx, a: &CentralityCommand) -> Result<(), Failure> {
    let loaded = load(ctx, &a.input)?;
    let g = &loaded.graph;
    let mut reports: Vec<CentralityReport> = Vec::new();
    for m in &a.measures {
        match m {
            Measure::Degree => reports.push(degree_centrality(g)?),
            Measure::Closeness => reports.push(closeness_centrality(g)?),
            Measure::Betweenness => reports.push(betweenness_centrality(g)?),
            Measure::Information => reports.push(information_centrality(g)?),
            Measure::Pagerank => {
                let r = pagerank(g, a.damping, PAGERANK_TOL, ITERATIVE_MAX)?;
                if !r.converged {
                    eprintln!("warning: PageRank did not converge");
                }
                reports.push(r);
            }
            Measure::Hits => {
                let h = hits(g, PAGERANK_TOL, ITERATIVE_MAX)?;
                for (name, scores) in [("authority", h.authority), ("hub", h.hub)] {
                    reports.push(CentralityReport {
                        measure: name.to_string(),
                        scores,
                        edge_scores: None,
                        flagged: Vec::new(),
                        converged: h.converged,
                    });
                }
            }
            Measure::Tc => {
                let tc = compute(ctx, &loaded, &a.tc)?;
                reports.push(CentralityReport {
                    measure: "tc".to_string(),
                    scores: tc.node_weights().to_vec(),
                    edge_scores: None,
                    flagged: Vec::new(),
                    converged: tc.converged,
                });
            }
        }
    }
    ctx.out.add("centrality.csv", io::centrality_csv(g, &reports));
    Ok(())
}

fn cmd_roles(ctx: &mut Ctx, a: &RolesCommand) -> Result<(), Failure> {
    let loaded = load(ctx, &a.input)?;
    let tc = compute(ctx, &loaded, &a.tc)?;
    let roles = roles_for(&loaded, &tc, &a.roles)?;
    ctx.out.add("roles.csv", io::roles_csv(&loaded.graph, &tc, &roles));
    Ok(())
}

fn set_of(expansions: &[Expansion]) -> CommunitySet {
    CommunitySet {
        communities: expansions.iter().map(|x| x.community.clone()).collect(),
        ..CommunitySet::default()
    }
}

fn cmd_communities(ctx: &mut Ctx, a: &CommunitiesCommand) -> Result<(), Failure> {
    let loaded = load(ctx, &a.input)?;
    let tc = compute(ctx, &loaded, &a.tc)?;
    let roles = roles_for(&loaded, &tc, &a.roles)?;
    let g = &loaded.graph;
    let mode = a.mode.into();
    if let Some(k) = a.k {
        let cs = find_k_communities(g, &roles, k)?;
        for w in &cs.warnings {
            eprintln!("warning: {w}");
        }
        ctx.out.add("communities.json", io::communities_json(g, &cs));
    } else if let Some(id) = &a.node {
        let xs = local_community_of_node(g, &tc, &roles, node(g, id)?, mode);
        ctx.out.add("communities.json", io::communities_json(g, &set_of(&xs)));
        ctx.out.add("trace.csv", io::trace_csv(g, &xs));
    } else if let Some(ids) = &a.seeds {
        let seeds = ids.iter().map(|s| node(g, s)).collect::<Result<Vec<_>, _>>()?;
        let r = local_community_of_set(g, &tc, &roles, &seeds, mode)?;
        let names = |v: &[usize]| v.iter().map(|&i| g.node_id(i).clone()).collect::<Vec<_>>();
        if !r.uncovered.is_empty() {
            eprintln!(
                "warning: no candidate core covers every seed; missing {:?}",
                names(&r.uncovered)
            );
        }
        let xs = [r.expansion.clone()];
        ctx.out.add("communities.json", io::communities_json(g, &set_of(&xs)));
        ctx.out.add("trace.csv", io::trace_csv(g, &xs));
        let detail = json!({
            "core_set": names(&r.core_set),
            "chosen": g.node_id(r.chosen),
            "uncovered": names(&r.uncovered),
        });
        ctx.out.add("seed_set.json", pretty(&detail));
    } else if let Some(id) = &a.core {
        let x = expand_from_core(g, &tc, &roles, node(g, id)?, mode, a.force)?;
        let xs = [x];
        ctx.out.add("communities.json", io::communities_json(g, &set_of(&xs)));
        ctx.out.add("trace.csv", io::trace_csv(g, &xs));
    }
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_backbone(ctx: &mut Ctx, a: &BackboneCommand) -> Result<(), Failure> {
    let loaded = load(ctx, &a.input)?;
    let tc = compute(ctx, &loaded, &a.tc)?;
    let roles = roles_for(&loaded, &tc, &a.roles)?;
    let bb = extract_backbone(&loaded.graph, &roles);
    for w in &bb.warnings {
        eprintln!("warning: {w}");
    }
    let summary = json!({
        "core_count": bb.core_count(),
        "backbone_edges": bb.backbone.edge_count(),
        "component_sizes": bb.component_sizes,
        "isolated_cores": bb.isolated_cores,
        "cooperation_density": cooperation_density(&loaded.graph),
        "density_bounds": density_bounds(loaded.graph.node_count()),
        "warnings": bb.warnings,
    });
    ctx.out.add("backbone.dot", io::graph_dot(&bb.backbone, "backbone"));
    ctx.out.add("backbone.tsv", io::write_edge_list(&bb.backbone));
    ctx.out.add("backbone.json", pretty(&summary));
    Ok(())
}

fn read_records(ctx: &mut Ctx, path: &Path) -> Result<(Vec<PaperRecord>, Vec<serde_json::Value>), Failure> {
    let bytes = read_source(path)?;
    ctx.out.inputs.push(InputDigest::of(source_name(path), &bytes));
    let parsed = parse_records(&bytes[..])?;
    for e in &parsed.errors {
        eprintln!("warning: record line {}: {}", e.line, e.reason);
    }
    let rejected = parsed
        .errors
        .iter()
        .map(|e| json!({"line": e.line, "reason": e.reason}))
        .collect();
    Ok((parsed.records, rejected))
}

fn cmd_evolve(ctx: &mut Ctx, a: &EvolveCommand, _to_dir: bool) -> Result<(), Failure> {
    let snapshots: Vec<(String, Graph)> = if let Some(path) = &a.records {
        let (records, _) = read_records(ctx, path)?;
        cumulative_snapshots(&records, build_coauthor_network)?
    } else {
        let mut out = Vec::new();
        for path in &a.snapshots {
            let bytes = read_source(path)?;
            ctx.out.inputs.push(InputDigest::of(source_name(path), &bytes));
            let label = path
                .file_stem()
                .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
            out.push((label, io::read_edge_list(&bytes[..], a.directed)?));
        }
        out
    };
    let series = evolution_series(&snapshots, &a.roles.config(), &a.tc.config())?;
    if let Some(s) = series.snapshots.iter().find(|s| !s.converged) {
        let msg = format!("TC did not converge for snapshot `{}`", s.label);
        if a.tc.strict {
            ctx.deferred = Some(Failure::NonConvergence(msg));
        } else {
            eprintln!("warning: {msg}");
        }
    }
    ctx.out.add("evolution.csv", io::evolution_csv(&series));
    ctx.out.add("evolution.json", pretty(&series));
    Ok(())
}

fn cmd_ingest(ctx: &mut Ctx, a: &IngestCommand, to_dir: bool) -> Result<(), Failure> {
    if a.cumulative_by_year && !to_dir {
        return Err(Failure::Usage("--cumulative-by-year requires --out-dir".into()));
    }
    let (records, rejected) = read_records(ctx, &a.records)?;
    let mode = if a.strict {
        CitationMode::Strict
    } else {
        CitationMode::Lenient
    };
    let mut report = json!({
        "records": records.len(),
        "rejected": rejected,
        "motifs": motif_census(&records),
    });
    let build = |recs: &[PaperRecord]| -> tcnet::Result<Graph> {
        match a.build {
            BuildArg::Coauthor => build_coauthor_network(recs),
            BuildArg::Citation => Ok(build_citation_network(recs, mode)?.graph),
            BuildArg::Hetero => Ok(build_heterogeneous_network(recs)?.graph),
        }
    };
    match a.build {
        BuildArg::Coauthor => {
            let g = build_coauthor_network(&records)?;
            ctx.out.add("network.tsv", io::write_edge_list(&g));
        }
        BuildArg::Citation => {
            let net = build_citation_network(&records, mode)?;
            for d in &net.dropped {
                eprintln!("warning: dropped citation {} -> {}: {}", d.citing, d.cited, d.reason);
            }
            report["dangling"] = json!(net.dangling);
            report["dropped"] = net
                .dropped
                .iter()
                .map(|d| json!({"citing": d.citing, "cited": d.cited, "reason": d.reason}))
                .collect();
            ctx.out.add("network.tsv", io::write_edge_list(&net.graph));
        }
        BuildArg::Hetero => {
            let net = build_heterogeneous_network(&records)?;
            report["dangling"] = json!(net.dangling);
            ctx.out.add("network.tsv", io::write_edge_list(&net.graph));
            ctx.out.add("nodes.csv", io::node_kinds_csv(&net.graph, &net.kinds));
        }
    }
    ctx.out.add("report.json", pretty(&report));
    if a.cumulative_by_year {
        for (year, g) in cumulative_snapshots(&records, build)? {
            ctx.out.add(format!("snapshots/{year}.tsv"), io::write_edge_list(&g));
        }
    }
    Ok(())
}

fn cmd_fixtures(ctx: &mut Ctx, a: &FixturesCommand) -> Result<(), Failure> {
    let (g, pinned) = fixture(a.name);
    ctx.out.add("graph.tsv", io::write_edge_list(&g));
    if let Some(tc) = pinned {
        ctx.out.add("tc_nodes.csv", io::tc_nodes_csv(&g, &tc));
    }
    Ok(())
}

fn cmd_table2(ctx: &mut Ctx) -> Result<(), Failure> {
    let g = fixture_tree16();
    ctx.out.inputs.push(InputDigest::of(
        "fixture:tree16",
        io::write_edge_list(&g).as_bytes(),
    ));
    let tc = compute_tc(&g, &Default::default())?;
    let pr = pagerank(&g, 0.85, PAGERANK_TOL, ITERATIVE_MAX)?;
    let cols = [
        ("C_D", degree_centrality(&g)?.scores),
        ("C_C", closeness_centrality(&g)?.scores),
        ("C_B", betweenness_centrality(&g)?.scores),
        ("C_I", information_centrality(&g)?.scores),
        ("PR", pr.scores),
        ("log_TC", log_tc(&tc)),
    ];
    let refs: Vec<(&str, &[f64])> = cols.iter().map(|(n, v)| (*n, v.as_slice())).collect();
    ctx.out.add("table2.csv", io::node_columns_csv(&g, &refs));
    Ok(())
}
