use thiserror::Error;

use crate::front::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("border mismatch: {0} right endpoints against {1} left endpoints")]
    BorderMismatch(usize, usize),
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("no Maslov potential: {0}")]
    Infeasible(String),
    #[error("bad matching: {0}")]
    Matching(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("search cap exceeded: {0} generators eligible, cap is {1}")]
    SearchCap(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
