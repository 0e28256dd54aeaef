use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
///
/// Variants split into two families: input errors (bad files, malformed
/// posets, non-functorial data) and internal invariant violations, which
/// mean the engine itself produced inconsistent data. [`Error::is_internal`]
/// tells them apart; the CLI maps them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("cover `{0}` < `{1}` is listed twice")]
    DuplicateCover(String, String),
    #[error("covers contain a directed cycle through `{0}`")]
    CycleDetected(String),
    #[error("`{0}` < `{1}` is not a cover: it is implied by `{0}` < `{2}` <= `{1}`")]
    NotACover(String, String, String),
    #[error("subset element `{0}` is not strictly below `{1}`")]
    SNotBelowP(String, String),

    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("cannot parse scalar `{0}`: {1}")]
    ParseScalar(String, String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid cochain complex: {0}")]
    InvalidComplex(String),
    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),
    #[error("chain map is not truncatable")]
    NotTruncatable,

    #[error(
        "restrictions do not commute for `{p}` <= `{q}`: the factorization through `{via_first}` \
         disagrees with the one through `{via_second}`"
    )]
    NonCommutingSquare { p: String, q: String, via_first: String, via_second: String },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("instance file: {0}")]
    Instance(String),

    #[error("matching map at `{0}` does not land in the limit")]
    NotInLimit(String),
    #[error("inductive equivalence violated for n = {n}: (1)={c1} (2)={c2} (3)={c3}")]
    EquivalenceViolated { n: usize, c1: bool, c2: bool, c3: bool },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that signal a bug in the engine rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotInLimit(_) | Error::EquivalenceViolated { .. } | Error::Internal(_)
        )
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
