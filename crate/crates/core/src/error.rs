use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generator {generator} out of range for rank {rank}")]
    GeneratorOutOfRange { generator: usize, rank: usize },

    #[error("unknown letter `{token}` at token {position}")]
    UnknownLetter { token: String, position: usize },

    #[error("malformed move `{text}` at token {position}: {reason}")]
    MalformedMove {
        text: String,
        position: usize,
        reason: String,
    },

    #[error("move uses the same letter twice ({0})")]
    DegenerateMove(usize),

    #[error("every generator is trivial")]
    TrivialSubgroup,

    #[error("images do not generate the free group of rank {rank}: {reason}")]
    NotInvertible { rank: usize, reason: String },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("signed letter does not occur in the cyclic word")]
    LetterAbsent,

    #[error("empty word")]
    EmptyWord,

    #[error("move is not classified: {0}")]
    Unclassifiable(String),

    #[error("surface too small: {0}")]
    RankTooSmall(String),

    #[error("role collision: {0}")]
    RoleCollision(String),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("step {step} out of range for a relation with {count} factors")]
    StepOutOfRange { step: usize, count: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("factor of rank {rank} is not proper in rank {ambient}")]
    NotProperFactor { rank: usize, ambient: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
