use thiserror::Error;

use crate::linalg::State3;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter schema error for map `{map}`: {detail}")]
    Schema { map: String, detail: String },

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("non-finite map value at state {state}")]
    Overflow { state: State3 },

    #[error("Newton did not converge after {iterations} iterations (last residual {residual:e})")]
    Divergence { iterations: usize, residual: f64 },

    #[error("Newton matrix near-singular (condition estimate {condition:e}); near a bifurcation")]
    NearBifurcation { condition: f64 },

    #[error("symbol sequence changed during Newton: {from} -> {to}")]
    SymbolFlip { from: String, to: String },

    #[error("continuation could not take its first step: {0}")]
    StartInvalid(String),

    #[error("unsupported manifold branch: {0}")]
    UnsupportedBranch(String),

    #[error("orbit escaped after {steps} steps")]
    Escaped { steps: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),
}
