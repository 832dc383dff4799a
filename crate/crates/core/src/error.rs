use thiserror::Error;

use crate::ops::FamilyTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("rank {rank} out of range for n = {n}")]
    RankOutOfRange { rank: u64, n: usize },

    #[error("n = {0} is too large to rank in 64 bits")]
    RankOverflow(usize),

    #[error("invalid rearrangement indices: {0}")]
    InvalidIndices(String),

    #[error("operations do not multiply to the given permutation")]
    FactorisationMismatch,

    #[error("expected an even permutation")]
    OddPermutation,

    #[error("n = {n} exceeds the search cap of {cap}; raise the cap explicitly")]
    CapExceeded { n: usize, cap: usize },

    #[error("generator family {family} is empty for n = {n}")]
    EmptyFamily { family: FamilyTag, n: usize },

    #[error("expected a {expected} distance table, got {found}")]
    WrongFamily { expected: FamilyTag, found: FamilyTag },

    #[error("generator family {0} is not closed under inverses")]
    NotSymmetric(FamilyTag),

    #[error("not a 2-permutation")]
    NotTwoPermutation,

    #[error("extremal construction needs n >= 3, got {0}")]
    TooSmall(usize),

    #[error("no crossing cycle found: {0}")]
    NoCrossing(String),

    #[error("algebraic identity violated: {0}")]
    IdentityViolation(String),

    #[error("malformed distance table dump: {0}")]
    BadDump(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
