use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid singularity type 1/{r}(1,{a})")]
    InvalidType { r: i64, a: i64 },
    #[error("operation undefined on a smooth point")]
    SmoothPoint,
    #[error("continued fraction digits must all be at least 2")]
    InvalidDigits,
    #[error("a complete fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("ray {index} = ({x}, {y}) is not primitive")]
    NonPrimitiveRay { index: usize, x: i64, y: i64 },
    #[error("rays {index} and {next} are not in strict counterclockwise position")]
    NonConvexOrClockwise { index: usize, next: usize },
    #[error("rays wind {0} times around the origin instead of once")]
    WrongWinding(i64),
    #[error("weights must be positive and pairwise coprime")]
    InvalidWeights,
    #[error("arguments must be coprime")]
    NotCoprime,
    #[error("monomial basis has {found} words but the algebra should have dimension {expected}")]
    BasisMismatch { expected: usize, found: usize },
    #[error("word is not a basis element")]
    NonBasisWord,
    #[error("cohomology computation gave negative h1")]
    NegativeH1,
    #[error("the Brauer class obstructs untwisting")]
    ObstructionPresent,
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("expected {expected} degrees, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("integer overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
