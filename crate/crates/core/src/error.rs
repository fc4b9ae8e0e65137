use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor rejected its parameters; `condition` names the violated requirement.
    #[error("{family}: parameter condition {condition} violated ({detail})")]
    ParameterDomain {
        family: &'static str,
        condition: &'static str,
        detail: String,
    },

    #[error("superposition denominator |D| = {value:e} below floor at (x, t) = ({x}, {t})")]
    SingularDenominator { x: f64, t: f64, value: f64 },

    #[error("operation requires lambda = {expected}, pair has lambda = {found}")]
    WrongLambda { expected: f64, found: f64 },

    #[error("pairs carry different lambda values ({0} and {1})")]
    LambdaMismatch(f64, f64),

    #[error("superposition needs distinct Bäcklund parameters, got eta1 = eta2 = {0}")]
    EqualParameters(f64),

    #[error("jet order {requested} exceeds supported maximum {max}")]
    OrderTooHigh { requested: usize, max: usize },

    #[error("max |field| = {max_abs:e} crossed ceiling {ceiling:e} at t = {time}")]
    BlowUp { time: f64, max_abs: f64, ceiling: f64 },

    #[error("time step {dt:e} exceeds advective stability bound {bound:e}")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(family: &'static str, condition: &'static str, detail: impl Into<String>) -> Self {
        Error::ParameterDomain {
            family,
            condition,
            detail: detail.into(),
        }
    }
}
