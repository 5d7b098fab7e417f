use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet size must be between 2 and 255, got {0}")]
    InvalidAlphabet(u32),

    #[error("symbol {symbol} is out of range for alphabet size {k}")]
    InvalidSymbol { symbol: u32, k: u8 },

    #[error("cannot parse {input:?} as a string over {k} symbols: {reason}")]
    Parse {
        input: String,
        k: u8,
        reason: String,
    },

    #[error("{what} needs {requested} units but the budget is {limit}")]
    Budget {
        what: &'static str,
        requested: String,
        limit: u64,
    },

    #[error("unknown language {name:?}; available: {}", available.join(", "))]
    UnknownLanguage {
        name: String,
        available: Vec<String>,
    },

    #[error("witness check failed for {language}: {detail}")]
    WitnessRejected { language: String, detail: String },

    #[error("language {language} failed validation: {detail}")]
    InvalidLanguage { language: String, detail: String },

    #[error("ancestor chain guard tripped at {input} after {steps} steps: {detail}")]
    ChainGuard {
        input: String,
        steps: usize,
        detail: String,
    },

    #[error("heuristic answered {decision} on {input} but the decider says {member}")]
    CorrectnessViolation {
        input: String,
        decision: String,
        member: bool,
    },

    #[error("failure law violated at n={n}: expected {expected} failures, counted {found}")]
    FailureLaw { n: usize, expected: u64, found: u64 },

    #[error("instance {index} (seed {seed}) should be {expected} but is not: {instance}")]
    SignViolation {
        index: usize,
        seed: u64,
        expected: &'static str,
        instance: String,
    },

    #[error("generator output {instance} lies outside the enumerated support")]
    OutsideSupport { instance: String },

    #[error("encoding collapsed the support: {distinct} distinct images of {expected} sources")]
    SupportMismatch { distinct: u64, expected: u64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn budget(what: &'static str, requested: impl ToString, limit: u64) -> Self {
        Error::Budget {
            what,
            requested: requested.to_string(),
            limit,
        }
    }
}
