use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{op}: dimension {n} exceeds the supported maximum {max}")]
    Size {
        op: &'static str,
        n: usize,
        max: usize,
    },

    #[error("{op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("{op}: {k} nodes per circle alias the integrand; need at least {min}")]
    Aliasing {
        op: &'static str,
        k: usize,
        min: usize,
    },

    #[error("{op}: recurrence lost positivity at index {index} (c = {value:e})")]
    Degradation {
        op: &'static str,
        index: usize,
        value: f64,
    },

    #[error("{op}: ill-conditioned input ({msg})")]
    Conditioning { op: &'static str, msg: String },

    #[error(
        "{op}: rule with {nodes} nodes is exact only to degree {max_degree}, requested {degree}"
    )]
    QuadratureDegree {
        op: &'static str,
        nodes: usize,
        max_degree: usize,
        degree: usize,
    },

    #[error("{op}: no convergence after {iterations} iterations (max residual {residual:e})")]
    Convergence {
        op: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub(crate) fn size(op: &'static str, n: usize, max: usize) -> Self {
        Error::Size { op, n, max }
    }
}
