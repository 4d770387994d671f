use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error for `{key}`: {message}")]
    InvalidConfig { key: String, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("non-physical state{}: rho = {rho:e}, p = {pressure:e}", at_cell(cell))]
    NonPhysicalState { cell: Option<(usize, usize)>, rho: f64, pressure: f64 },

    #[error("vacuum: density {density:e} below threshold {threshold:e}")]
    Vacuum { density: f64, threshold: f64 },

    #[error("degenerate temperature {temperature:e}")]
    DegenerateTemperature { temperature: f64 },

    #[error("temperature tensor is not positive definite (det = {det:e}, trace = {trace:e})")]
    ClosureFailure { det: f64, trace: f64 },

    #[error("discrete equilibrium did not converge (residual {residual:e})")]
    EquilibriumNotConverged { residual: f64 },

    #[error("moment realizability violated: C-bar = {c_bar} <= 1")]
    RealizabilityViolation { c_bar: f64 },

    #[error("Riemann problem: {0}")]
    Riemann(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("stage {stage}, cell ({i}, {j}): {source}")]
    InStage {
        stage: usize,
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn at_cell(cell: &Option<(usize, usize)>) -> String {
    match cell {
        Some((i, j)) => format!(" at cell ({i}, {j})"),
        None => String::new(),
    }
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig { key: key.into(), message: message.into() }
    }

    /// Attaches a cell index to a non-physical-state error.
    pub fn at_cell(self, i: usize, j: usize) -> Self {
        match self {
            Error::NonPhysicalState { rho, pressure, .. } => {
                Error::NonPhysicalState { cell: Some((i, j)), rho, pressure }
            }
            other => other,
        }
    }

    pub(crate) fn at_stage(self, stage: usize, i: usize, j: usize) -> Self {
        match self {
            e @ Error::InStage { .. } => e,
            other => Error::InStage { stage, i, j, source: Box::new(other) },
        }
    }
}
