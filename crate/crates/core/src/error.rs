use thiserror::Error;

/// Errors raised by constructors, operators and functionals.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("nonpositive denominator {0:e}")]
    NonPositiveDenominator(f64),
    #[error("quadrature did not converge on [{lo}, {hi}]")]
    Convergence { lo: f64, hi: f64 },
    #[error("bracket failure: {0}")]
    Bracket(String),
    #[error("oracle certification mismatch at t = {point}: oracle root {oracle} differs by {gap:e}")]
    Certification { point: f64, oracle: f64, gap: f64 },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
