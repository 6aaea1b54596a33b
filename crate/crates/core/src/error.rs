use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("confusion counts are empty")]
    EmptyCounts,

    #[error("mediation undefined: all weights are zero")]
    UndefinedMediation,

    #[error("coefficient of variation undefined: mean utility is zero")]
    DegenerateFairness,

    #[error("insufficient data: need {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("clothing surface temperature did not converge for {inputs}")]
    PmvNonConvergence { inputs: String },

    #[error("thermal integration unstable: room temperature {t_room} degC left the guard band")]
    Unstable { t_room: f64 },

    #[error("governor iteration {iteration}: {source}")]
    Governor {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("mediator iteration {iteration}: {source}")]
    Mediator {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("human {human}: {source}")]
    Human {
        human: String,
        #[source]
        source: Box<Error>,
    },

    #[error("oracle state {state}: {source}")]
    Oracle {
        state: String,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown scenario {name:?}; valid scenarios: {valid}")]
    UnknownScenario { name: String, valid: String },

    #[error("unknown config key {0:?}")]
    UnknownKey(String),

    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn range(what: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Error::OutOfRange { what, value, lo, hi }
    }
}
