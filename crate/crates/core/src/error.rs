use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid player {player}: game has {players} players")]
    InvalidPlayer { player: usize, players: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("players do not share strategy labels")]
    LabelMismatch,

    #[error("game is not an m-strategy game (strategy counts {0:?})")]
    NotMStrategy(Vec<usize>),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("cannot compose bijections: {0}")]
    Composition(String),

    #[error("group is not player transitive")]
    NotPlayerTransitive,

    #[error("group is not strategy trivial")]
    NotStrategyTrivial,

    #[error("missing parameter `{0}`")]
    MissingParameter(String),

    #[error("unknown fixture family `{0}`")]
    UnknownFamily(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// The input could not be read as a document at all (syntax, missing
    /// field, wrong JSON type).
    #[error("malformed document at `{field}`: {message}")]
    Malformed { field: String, message: String },

    /// The document parsed but violates a game invariant.
    #[error("invalid document at `{field}`: {message}")]
    Invalid { field: String, message: String },
}

impl Error {
    pub(crate) fn malformed(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Malformed {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}
