use thiserror::Error;

/// Errors raised by the model, sampling and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters K={k}, P={p}: need 1 <= K <= P")]
    InvalidTheta { k: u64, p: u64 },

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("subset size {size} exceeds key pool size {pool}")]
    SubsetTooLarge { size: u64, pool: u64 },

    #[error("need at least {min} nodes, got {n}")]
    TooFewNodes { n: u64, min: u64 },

    #[error("cross moment {value} outside admissible bracket [{lower}, {upper}]")]
    CrossMomentOutOfBracket { value: f64, lower: f64, upper: f64 },

    #[error("identity requires 3K <= P, got K={k}, P={p}")]
    NeedsThreeRingsOfRoom { k: u64, p: u64 },

    #[error("key rings have unequal sizes ({first} vs {other})")]
    RingSizeMismatch { first: usize, other: usize },

    #[error("invalid key ring: {0}")]
    InvalidKeyRing(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("oracle guard exceeded: {iterations} iterations > {limit}")]
    OracleGuard { iterations: u128, limit: u128 },

    #[error("invalid scaling family: {0}")]
    InvalidFamily(String),

    #[error("replications must be at least 1")]
    NoReplications,
}

impl Error {
    /// True for violations of a model precondition (as opposed to guard or I/O problems).
    pub fn is_model_violation(&self) -> bool {
        !matches!(self, Error::OracleGuard { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
