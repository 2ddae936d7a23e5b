use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inputs whose shapes or lengths do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A value outside the domain an operation is defined on, such as a
    /// parameter outside a model's prior support.
    #[error("domain error: {0}")]
    Domain(String),

    /// The model has no closed-form or quadrature marginal likelihood.
    #[error("no exact marginal likelihood available for model {0}")]
    UnsupportedModel(String),

    /// A regression problem with no usable information, such as a single
    /// response class or an all-constant design.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// Every summary component had zero spread across the bank.
    #[error("degenerate summaries: {0}")]
    DegenerateSummaries(String),

    /// Ratio-of-counts estimate with an empty denominator.
    #[error("Bayes factor undefined: no acceptances for model index {0}")]
    UndefinedBayesFactor(usize),

    /// Rejection sampling against a training region kept too little prior
    /// mass to be practical.
    #[error(
        "truncated prior sampling for model index {model} fell below an acceptance \
         rate of 1e-4; inflate the training region"
    )]
    TruncationTooTight { model: usize },

    /// A runtime configuration that fails validation before any work runs.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown model id: {0:?}")]
    UnknownModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the batch interface: configuration problems
    /// get 2, everything else 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::UnknownModel(_) => 2,
            _ => 1,
        }
    }
}
