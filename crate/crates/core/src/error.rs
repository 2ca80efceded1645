use thiserror::Error;

/// Errors shared across the library.
///
/// Partiality is *not* an error: an instruction or structural map that is
/// undefined on its input reports `None` through its own return type.  The
/// variants here are contract violations — malformed objects, unknown names,
/// arity mismatches — that no well-formed caller should trigger.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown instruction `{0}`")]
    UnknownInstruction(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("labelling has no entry for label `{0}`")]
    MissingLabel(String),
    #[error("no program supplied for map `{0}`")]
    MissingProgram(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("variables escape the declared frame: {0}")]
    FrameMismatch(String),
    #[error("malformed graph: {0}")]
    InvalidGraph(String),
    #[error("invalid component `{0}`: {1}")]
    InvalidComponent(String, String),
    #[error("terminal-state convention violated: {0}")]
    ConventionViolation(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("theory has counterexamples: {0}")]
    ModelCheckFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size function rejected: {0}")]
    SizeFunction(String),
    #[error("budget exhausted")]
    BudgetExceeded,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
