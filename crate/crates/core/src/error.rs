use std::path::PathBuf;

use crate::simplex::Simplex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("vertex {vertex} outside ambient vertex set {{0..={n}}}")]
    VertexOutOfRange { vertex: u32, n: u32 },

    #[error("simplex {simplex} has dimension {dim} above the ambient limit r={r}")]
    DimensionOverflow { simplex: Simplex, dim: usize, r: usize },

    #[error("set is not downward closed: {face} is missing but {simplex} is present")]
    NotClosed { simplex: Simplex, face: Simplex },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("enumeration over {simplices} simplices exceeds the 2^{limit} hypergraph bound")]
    EnumerationTooLarge { simplices: usize, limit: usize },

    #[error(
        "boundary matrix in dimension {dim} has {nonzeros} nonzeros, above the cap of {cap}; \
         collapse the complex first"
    )]
    ResourceCap { dim: usize, nonzeros: usize, cap: usize },

    #[error("complex would have {simplices} simplices, above the cap of {cap}")]
    SimplexCap { simplices: u128, cap: u128 },

    #[error("torsion coefficient {0} does not fit in 64 bits")]
    TorsionOverflow(String),

    #[error("predictions need a U_ell regime, got {0}")]
    Regime(String),

    #[error(
        "face chooser for n={n} ell={ell} i={i} failed after {attempts} attempt(s): \
         {worst} has {count} preimages, needs {required}"
    )]
    ChooserBudgetExhausted {
        n: u32,
        ell: usize,
        i: usize,
        attempts: usize,
        worst: Simplex,
        count: u64,
        required: u64,
    },

    #[error("deterministic law violated: {0}")]
    LawViolation(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
