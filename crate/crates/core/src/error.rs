use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid character {0:?} in word (expected a, b, c, d or the literal 1)")]
    InvalidCharacter(char),

    #[error("word is not in the first level stabilizer (odd number of a's)")]
    NotInStabilizer,

    #[error("quotient build did not reach index 16 by depth {cap}")]
    BuildDivergence { cap: usize },

    #[error("lift table is not single-valued at pair ({0}, {1})")]
    LiftNotSingleValued(u8, u8),

    #[error("base Q-set sandwich did not close by conjugator length {max_len}")]
    SandwichGap { max_len: usize },

    #[error("conjugacy table row exceeded 256 entries")]
    CapacityViolation,

    #[error("letter {0:?} is not in {{a, d}}")]
    NotDihedral(char),

    #[error("coset pair is not in the image of the splitting map")]
    NotLiftable,

    #[error("lifted word left a non-trivial dihedral residual {0}")]
    LiftResidual(String),

    #[error("base conjugator table left {missing} slots unfilled at length {max_len}")]
    BaseIncomplete { missing: usize, max_len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
