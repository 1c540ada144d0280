use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge #{edge} references unknown endpoint `{node}`")]
    DanglingEndpoint { edge: usize, node: String },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("invalid {what} weight {value}")]
    InvalidWeight { what: &'static str, value: f64 },

    #[error("graph is empty")]
    EmptyGraph,

    #[error("{measure} needs at least {required} nodes, graph has {actual}")]
    TooFewNodes {
        measure: &'static str,
        required: usize,
        actual: usize,
    },

    #[error("network efficiency is zero, relative drop is undefined")]
    ZeroEfficiency,

    #[error("{0} requires a directed graph")]
    NotDirected(&'static str),

    #[error("node `{0}` is not a core node")]
    NotCore(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("snapshot `{snapshot}` is not cumulative: {reason}")]
    NonCumulative { snapshot: String, reason: String },

    #[error("citation cycle: {}", .0.join(" -> "))]
    CitationCycle(Vec<String>),

    #[error("paper `{citing}` ({citing_year}) cites later paper `{cited}` ({cited_year})")]
    LaterYearCitation {
        citing: String,
        citing_year: i32,
        cited: String,
        cited_year: i32,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
