use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// `4N(α) + (β̄ − β)²` is a square (possibly zero) in GF(q).
    #[error("invalid unital parameters: discriminant {discriminant} is a square in GF(q)")]
    InvalidUnital { discriminant: u32 },

    /// A line meets a supposed unital in a number of points other than 1 or q+1.
    #[error("structural violation: line {line} meets the unital in {count} points")]
    Structural { line: String, count: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("degenerate conic configuration: solution space has dimension {nullity}")]
    DegenerateConic { nullity: usize },
}

impl Error {
    /// Errors that mean a checked mathematical statement failed, as opposed to
    /// bad input.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            Error::Structural { .. } | Error::TheoremViolation(_) | Error::Inconsistent(_)
        )
    }
}
