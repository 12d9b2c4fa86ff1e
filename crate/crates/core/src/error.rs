use thiserror::Error;

use crate::Component;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system parameters: {0}")]
    InvalidParams(String),

    #[error("{func}: argument outside domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("{component}: series did not converge after {terms} terms (partial value {partial})")]
    SeriesNotConverged {
        component: Component,
        terms: usize,
        partial: f64,
    },

    #[error("{component}: closed form produced {value}, outside [0, 1] beyond rounding slack")]
    ProbabilityOutOfRange { component: Component, value: f64 },

    #[error("{component}: quadrature did not converge (estimate {value}, error {abs_err})")]
    QuadratureNotConverged {
        component: Component,
        value: f64,
        abs_err: f64,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}
