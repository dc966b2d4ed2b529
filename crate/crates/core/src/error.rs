use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid finite type {letter}{rank}")]
    InvalidType { letter: char, rank: usize },

    #[error("letter {letter} is out of range for rank {rank}")]
    LetterOutOfRange { letter: usize, rank: usize },

    #[error("{0:?} is not a root")]
    NotARoot(Vec<i32>),

    #[error("{0:?} is not a positive root")]
    NotPositive(Vec<i32>),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i32>),

    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),

    #[error("x = {x:?} is not below w = {w:?} in Bruhat order")]
    NotBelow { x: Vec<usize>, w: Vec<usize> },

    #[error("group order exceeds the limit of {limit} elements")]
    GroupTooLarge { limit: usize },

    #[error("element is not in the enumerated group")]
    UnknownElement,

    #[error("shellability condition fails: lambda = {lambda:?}, C+ = {plus:?}, C- = {minus:?}")]
    ConditionFails {
        lambda: Vec<usize>,
        plus: Vec<usize>,
        minus: Vec<usize>,
    },

    #[error("unlucky spectral point: 1 - z^alpha vanishes for alpha = {0:?}")]
    UnluckyPoint(Vec<i32>),

    #[error("no valid spectral point after {0} attempts")]
    PointExhausted(usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
