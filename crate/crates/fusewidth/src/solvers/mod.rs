//! Exact solvers on reduced glue-expressions (Max Cut, Edge Dominating Set,
//! Hamiltonian Cycle) and on normalized multi-expressions (Dominating Set,
//! q-Coloring, Chromatic Number, Connected Vertex Cover, Connected
//! Dominating Set).

pub mod active;
pub mod coloring;
pub mod cutcount;
pub mod ds;
pub mod eds;
pub mod hc;
pub mod maxcut;

use thiserror::Error;

use crate::expr::{ExprError, ValidationReport};
use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("expression is not valid:\n{0}")]
    Invalid(ValidationReport),
    #[error("expression is not reduced: {0}")]
    NotReduced(String),
    #[error("{0}")]
    Parameter(String),
    #[error("{0}")]
    Graph(#[from] GraphError),
}

impl From<ExprError> for SolveError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Invalid(rep) => SolveError::Invalid(rep),
            other => SolveError::Parameter(other.to_string()),
        }
    }
}

/// Answer plus run statistics; the CLI prints it line-oriented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub answer: Answer,
    pub seed: Option<u64>,
    pub max_table: usize,
    pub certificate: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Int(i64),
    Bool(bool),
    Count(u64),
    None,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Answer::Int(v) => write!(f, "{v}"),
            Answer::Bool(v) => write!(f, "{v}"),
            Answer::Count(v) => write!(f, "{v}"),
            Answer::None => write!(f, "none"),
        }
    }
}

impl SolveReport {
    pub fn new(answer: Answer) -> Self {
        SolveReport { answer, seed: None, max_table: 0, certificate: None }
    }
}
