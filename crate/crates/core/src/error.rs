use thiserror::Error;

pub type Result<T, E = FrobError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FrobError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("path algebra is infinite dimensional (no truncation up to path length {0})")]
    InfiniteDimensional(usize),
    #[error("polynomial is reducible over F_{0}")]
    ReduciblePolynomial(u32),
    #[error("invalid idempotents: {0}")]
    InvalidIdempotents(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("radical is not nilpotent")]
    RadicalNotNilpotent,
    #[error("idempotents are not primitive; operation needs a primitive set")]
    NonPrimitiveIdempotents,
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("not an algebra automorphism: {0}")]
    NotAutomorphism(String),
    #[error("left and right actions do not commute: {0}")]
    ActionsDoNotCommute(String),
    #[error("module is not injective")]
    NotInjective,
    #[error("extension of the socle embedding failed")]
    ExtensionFailure,
    #[error("not projective as a left module")]
    NotLeftProjective,
    #[error("not projective as a right module")]
    NotRightProjective,
    #[error("left and right duals are not isomorphic: {0}")]
    DualsNotIsomorphic(String),
    #[error("isomorphism search exhausted without a verdict")]
    Unknown,
    #[error("not right localizing: {0}")]
    NotRightLocalizing(String),
    #[error("not faithful: {0}")]
    NotFaithful(String),
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("subspaces are not disjoint: {0}")]
    NotDisjoint(String),
    #[error("subspaces do not cover: {0}")]
    NotCover(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl FrobError {
    /// The variant name, e.g. `HypothesisFailure`.
    pub fn kind(&self) -> String {
        let dbg = format!("{self:?}");
        dbg.split(['(', ' ']).next().unwrap_or_default().to_string()
    }
}
