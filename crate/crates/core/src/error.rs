use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("service graph contains a directed cycle through {0:?}")]
    CycleDetected(Vec<String>),
    #[error("duplicate service id {0:?}")]
    DuplicateVertexId(String),
    #[error("service {id:?} has negative {field} {value}")]
    NegativeCost { id: String, field: &'static str, value: String },
    #[error("no source-to-sink path exists")]
    NoPathExists,
    #[error("{players} players exceeds the enumeration cap of {cap}")]
    TooManyPlayers { players: usize, cap: usize },
    #[error("unknown player {0:?}")]
    UnknownPlayer(String),
    #[error("no player can reach the sink within the budget")]
    NoAffordablePath,
    #[error("the game has no announced prices")]
    MissingAnnouncedPrices,
    #[error("no stable imputation exists at this budget")]
    NoStableImputation,
    #[error("service {0:?} lies on every source-to-sink path")]
    UnavoidableVertex(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

impl GameError {
    /// Stable machine-readable code, used in CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            GameError::MalformedDocument(_) => "MalformedDocument",
            GameError::CycleDetected(_) => "CycleDetected",
            GameError::DuplicateVertexId(_) => "DuplicateVertexId",
            GameError::NegativeCost { .. } => "NegativeCost",
            GameError::NoPathExists => "NoPathExists",
            GameError::TooManyPlayers { .. } => "TooManyPlayers",
            GameError::UnknownPlayer(_) => "UnknownPlayer",
            GameError::NoAffordablePath => "NoAffordablePath",
            GameError::MissingAnnouncedPrices => "MissingAnnouncedPrices",
            GameError::NoStableImputation => "NoStableImputation",
            GameError::UnavoidableVertex(_) => "UnavoidableVertex",
            GameError::InvalidParameters(_) => "InvalidParameters",
        }
    }

    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            GameError::MalformedDocument(_)
                | GameError::CycleDetected(_)
                | GameError::DuplicateVertexId(_)
                | GameError::NegativeCost { .. }
                | GameError::NoPathExists
        )
    }
}

pub type Result<T, E = GameError> = std::result::Result<T, E>;
