use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("{what} = {value} is outside {lo}..={hi}")]
    Range {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("budget infeasible: {0}")]
    BudgetInfeasible(String),

    #[error("cotangent pole crossed: |{0}| >= 2π")]
    Singularity(f64),

    #[error("{what}: {got} exceeds the cap of {cap}")]
    DimensionCap {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("component {index} of θ is zero; {function} requires nonzero components")]
    ZeroComponent {
        function: &'static str,
        index: usize,
    },

    #[error("invalid coefficient model: {0}")]
    InvalidModel(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            function,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
