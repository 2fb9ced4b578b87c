use thiserror::Error;

use crate::vertex_set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("vertex universe of {0} exceeds the 128-vertex capacity")]
    UniverseTooLarge(usize),

    #[error("edge {edge} is not contained in the {n}-vertex universe")]
    EdgeOutOfRange { edge: VertexSet, n: usize },

    #[error("edge {edge} has size {found}, expected {expected}")]
    NotUniform {
        edge: VertexSet,
        expected: usize,
        found: usize,
    },

    #[error("input is not in J(r={r},t={t}): {reason}")]
    NotMember { r: usize, t: usize, reason: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("pair ({first}, {second}) intersects in {size}, not divisible by {q}")]
    NotDivisible {
        first: VertexSet,
        second: VertexSet,
        size: usize,
        q: usize,
    },

    #[error("saturation would scan {candidates} candidate sets (cap {cap})")]
    SaturationCap { candidates: u128, cap: u128 },

    #[error("search budget exhausted before {0} could be decided")]
    Undecided(String),

    #[error("internal check `{check}` failed: {detail}")]
    Assertion { check: String, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::UniverseTooLarge(_) => "universe_too_large",
            Error::EdgeOutOfRange { .. } => "edge_out_of_range",
            Error::NotUniform { .. } => "not_uniform",
            Error::NotMember { .. } => "not_member",
            Error::Precondition(_) => "precondition",
            Error::NotDivisible { .. } => "not_divisible",
            Error::SaturationCap { .. } => "saturation_cap",
            Error::Undecided(_) => "undecided",
            Error::Assertion { .. } => "assertion",
        }
    }

    pub(crate) fn assertion(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Assertion {
            check: check.into(),
            detail: detail.into(),
        }
    }
}
