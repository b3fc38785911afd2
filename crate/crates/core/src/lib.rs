//! Decision procedures for the first Grigorchuk group.
//!
//! Elements are reduced words over `{a, b, c, d}`. The crate answers the word
//! problem, the conjugacy problem and the conjugate-pair problem in linear
//! time, and builds explicit conjugators in polynomial time.

pub mod engine;
pub mod error;
pub mod ops;
pub mod oracle;
pub mod portrait;
pub mod quotient;
pub mod search;
pub mod sptree;
pub mod trie;
pub mod words;

pub use engine::{are_conjugate, conjugate_pairs, q_set, solve};
pub use error::{Error, Result};
pub use quotient::{CosetId, CosetSet, QuotientTables};
pub use search::{find_conjugator, lift_word};
pub use words::{equal, is_identity, Letter, NormWeights, ReducedWord};
