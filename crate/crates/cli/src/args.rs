use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tcnet::{AdmissionMode, Family, GeneratorSpec, RoleConfig, TcConfig};

use crate::Failure;

#[derive(Debug, Parser)]
#[command(name = "tcnet", version, about = "Topological centrality, roles, communities and backbones")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write all outputs plus manifest.json here instead of printing the
    /// main output to stdout.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a synthetic graph as an edge list.
    Generate(GenerateArgs),
    /// Topological centrality weights and residual history.
    Tc(TcCommand),
    /// Classical centrality measures next to TC.
    Centrality(CentralityCommand),
    /// Core / margin / bridge / mediated roles.
    Roles(RolesCommand),
    /// Global or local role-based communities.
    Communities(CommunitiesCommand),
    /// Backbone induced on core nodes.
    Backbone(BackboneCommand),
    /// Per-snapshot centers and backbones of a cumulative series.
    Evolve(EvolveCommand),
    /// Build networks from JSON-lines paper records.
    Ingest(IngestCommand),
    /// Export a built-in fixture graph.
    Fixtures(FixturesCommand),
    /// Centrality comparison table on the 16-node tree.
    Table2,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Ring,
    Lattice,
    Complete,
    Ws,
    Er,
    Path,
    Star,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureArg {
    Tree16,
    Expansion,
    CenterBridge,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenParams {
    /// Node count (ring, complete, ws, er, path, star).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Lattice degree of the small-world ring (even).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Rewiring (ws) or edge (er) probability.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl GenParams {
    pub fn spec(&self, family: FamilyArg) -> Result<GeneratorSpec, Failure> {
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| Failure::Usage(format!("--family {family:?} requires --{flag}").to_lowercase()))
        };
        let prob = || {
            self.p
                .ok_or_else(|| Failure::Usage(format!("--family {family:?} requires --p").to_lowercase()))
        };
        let fam = match family {
            FamilyArg::Ring => Family::Ring { n: need(self.n, "n")? },
            FamilyArg::Lattice => Family::Lattice {
                rows: need(self.rows, "rows")?,
                cols: need(self.cols, "cols")?,
            },
            FamilyArg::Complete => Family::Complete { n: need(self.n, "n")? },
            FamilyArg::Ws => Family::WsSmallWorld {
                n: need(self.n, "n")?,
                k: need(self.degree, "degree")?,
                p: prob()?,
            },
            FamilyArg::Er => Family::ErRandom {
                n: need(self.n, "n")?,
                p: prob()?,
            },
            FamilyArg::Path => Family::Path { n: need(self.n, "n")? },
            FamilyArg::Star => Family::Star { n: need(self.n, "n")? },
        };
        Ok(GeneratorSpec::seeded(fam, self.seed))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[command(flatten)]
    pub params: GenParams,
}

/// Where the graph comes from: a file, a generator, or a fixture.
#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "family", "fixture"])))]
pub struct InputArgs {
    /// Edge-list file, `-` for stdin.
    #[arg(long)]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, value_enum)]
    pub fixture: Option<FixtureArg>,
    /// Read the edge list as directed arcs.
    #[arg(long)]
    pub directed: bool,
    #[command(flatten)]
    pub params: GenParams,
}

fn parse_omega(s: &str) -> Result<(String, f64), String> {
    let (rel, w) = s
        .split_once('=')
        .ok_or_else(|| format!("expected relation=weight, got `{s}`"))?;
    let w: f64 = w.parse().map_err(|_| format!("weight `{w}` is not a number"))?;
    Ok((rel.to_string(), w))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TcArgs {
    /// Iteration cap.
    #[arg(long, default_value_t = 100)]
    pub max: usize,
    /// Residual tolerance for both nodes and edges.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long)]
    pub eps_nodes: Option<f64>,
    #[arg(long)]
    pub eps_edges: Option<f64>,
    /// Relation multiplier `relation=weight`; repeatable.
    #[arg(long = "omega", value_parser = parse_omega)]
    pub omega: Vec<(String, f64)>,
    /// Exit with status 3 when TC does not converge.
    #[arg(long)]
    pub strict: bool,
}

impl TcArgs {
    pub fn config(&self) -> TcConfig {
        let mut cfg = TcConfig::default()
            .with_max_iterations(self.max)
            .with_eps(self.eps);
        if let Some(e) = self.eps_nodes {
            cfg.eps_nodes = e;
        }
        if let Some(e) = self.eps_edges {
            cfg.eps_edges = e;
        }
        if !self.omega.is_empty() {
            let map: BTreeMap<String, f64> = self.omega.iter().cloned().collect();
            cfg = cfg.with_relation_weights(map);
        }
        cfg
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RoleArgs {
    /// A node is core when the fraction of lower-TC neighbors exceeds this.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Also apply the center override to centers tied with a neighbor.
    #[arg(long)]
    pub override_tied_centers: bool,
}

impl RoleArgs {
    pub fn config(&self) -> RoleConfig {
        RoleConfig {
            core_threshold: self.threshold,
            override_tied_centers: self.override_tied_centers,
            ..RoleConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TcCommand {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tc: TcArgs,
    /// Also bin log-TC values into this many bins.
    #[arg(long)]
    pub histogram: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Degree,
    Closeness,
    Betweenness,
    Information,
    Pagerank,
    Hits,
    Tc,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CentralityCommand {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tc: TcArgs,
    /// Comma-separated measures.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "degree,closeness,betweenness,information,pagerank,tc"
    )]
    pub measures: Vec<Measure>,
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RolesCommand {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tc: TcArgs,
    #[command(flatten)]
    pub roles: RoleArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Trace,
    Literal,
}

impl From<ModeArg> for AdmissionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Trace => AdmissionMode::Trace,
            ModeArg::Literal => AdmissionMode::Literal,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("target").required(true).args(["k", "node", "seeds", "core"])))]
pub struct CommunitiesCommand {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tc: TcArgs,
    #[command(flatten)]
    pub roles: RoleArgs,
    /// Global discovery merged down to k communities.
    #[arg(long)]
    pub k: Option<usize>,
    /// Local communities of one node.
    #[arg(long)]
    pub node: Option<String>,
    /// Local community containing all of these comma-separated nodes.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<String>>,
    /// Expansion from this core node.
    #[arg(long)]
    pub core: Option<String>,
    /// Allow `--core` on a non-core node.
    #[arg(long)]
    pub force: bool,
    #[arg(long, value_enum, default_value = "trace")]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BackboneCommand {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tc: TcArgs,
    #[command(flatten)]
    pub roles: RoleArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("series").required(true).args(["snapshots", "records"])))]
pub struct EvolveCommand {
    /// Cumulative edge-list snapshots in order; labels are file stems.
    #[arg(long, num_args = 1..)]
    #[serde(skip)]
    pub snapshots: Vec<PathBuf>,
    /// Paper records; coauthor networks accumulated by year.
    #[arg(long)]
    #[serde(skip)]
    pub records: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    #[command(flatten)]
    pub tc: TcArgs,
    #[command(flatten)]
    pub roles: RoleArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuildArg {
    Coauthor,
    Citation,
    Hetero,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IngestCommand {
    /// JSON-lines paper records, `-` for stdin.
    #[arg(long)]
    #[serde(skip)]
    pub records: PathBuf,
    #[arg(long, value_enum)]
    pub build: BuildArg,
    /// Reject citation cycles and later-year citations instead of dropping them.
    #[arg(long)]
    pub strict: bool,
    /// Also write one cumulative snapshot per year (requires --out-dir).
    #[arg(long)]
    pub cumulative_by_year: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FixturesCommand {
    #[arg(long, value_enum)]
    pub name: FixtureArg,
}
