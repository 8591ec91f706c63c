use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("minimal polynomial is not monic")]
    NonMonic,
    #[error("minimal polynomial is not squarefree")]
    NotSquarefree,
    #[error("minimal polynomial has degree 0")]
    ConstantPolynomial,
    #[error("integral basis is invalid: {0}")]
    InvalidBasis(String),
    #[error("integral basis is not closed under multiplication: {0}")]
    NotARing(String),
    #[error("requested precision of {0} bits is unreachable")]
    PrecisionUnreachable(u32),
    #[error("complex conjugation is not an automorphism of this field")]
    ConjugationUnavailable,
    #[error("exact Gram matrix unavailable; only interval data exists")]
    FloatModeOnly,
    #[error("enumeration node budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("scaling vector has a zero component")]
    ZeroComponent,
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("matrix is not unimodular over the ring of integers")]
    NonUnimodular,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("lattice is not well rounded: {0}")]
    NotWellRounded(String),
    #[error("field `{0}` is not in the class-number-one whitelist")]
    NotWhitelisted(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("boundary condition violated: d_{0} composed with d_{1} is nonzero")]
    BoundaryViolation(usize, usize),
    #[error("comparison undecided at maximal precision")]
    Undecided,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("residue classes incompletely covered: found {found} of {expected}")]
    IncompleteCoverage { found: u64, expected: u64 },
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
}
