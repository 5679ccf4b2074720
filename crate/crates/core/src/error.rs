use thiserror::Error;

use crate::poly::{Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent {exponent} exceeds ambient degree {degree}")]
    ExponentExceedsDegree { exponent: usize, degree: usize },

    #[error("ambient degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("invalid polynomial: {0}")]
    ParsePolynomial(String),

    #[error("invalid interpolation matrix: {0}")]
    ParseMatrix(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("Pólya condition needs |E| = d+1 = {expected}, matrix has {ones} ones")]
    PolyaNeedsFullCount { ones: usize, expected: usize },

    #[error("matrix violates the tail-count condition; completion would break upper Pólya")]
    CompletionPrecondition,

    #[error("slope split needs a sequence of at least two values")]
    SequenceTooShort,

    #[error("knot {0} appears more than once")]
    DuplicateKnot(Rational),

    #[error("matrix has {rows} rows but {knots} knots were given")]
    KnotCountMismatch { rows: usize, knots: usize },

    #[error("{ones} constraints exceed the dimension {dimension} of the polynomial space")]
    TooManyConstraints { ones: usize, dimension: usize },

    #[error("{terms} powers cannot be independent in a space of dimension {dimension}")]
    TooManyTerms { terms: usize, dimension: usize },

    #[error("family contains (x+{shift})^{exponent} twice")]
    DuplicateTerm { shift: Rational, exponent: usize },

    #[error("family is empty")]
    EmptyFamily,

    #[error("split column {r} out of range for degree {degree}")]
    InvalidSplit { r: usize, degree: usize },

    #[error("pair is not regular; nonzero solution {witness}")]
    Irregular { witness: Polynomial },

    #[error("lower bound hypothesis violated: k = {k} exceeds (d+2)/4 with d = {degree}")]
    BoundHypothesis { k: usize, degree: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
