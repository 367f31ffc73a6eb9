//! Generation of all (n+1, n+1)-combinations by star transpositions, with a
//! rotation-symmetric block structure on the flip sequence, plus an
//! independent brute-force verifier for every structural claim the
//! construction relies on.
//!
//! The generator walks the middle-levels graph one flip at a time: each step
//! costs O(n) work and O(n) memory, deciding locally whether to follow the
//! basic vertex bijection or to divert along a gluing hexagon or a shift
//! switch. The `verifier` module rebuilds everything by brute force at desk
//! scale and certifies the streams the generator emits.

pub mod bitstring;
pub mod dynamics;
pub mod exec;
pub mod generator;
pub mod gluing;
pub mod spanning;
pub mod switches;
pub mod tree;
pub mod verifier;

pub use bitstring::{dyck_align, Bitstring, MiddleVertex, Side};

use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("empty word not allowed here")]
    EmptyWord,
    #[error("invalid character {0:?} in bitstring")]
    BadCharacter(char),
    #[error("bad word length {0} (need odd length >= 3)")]
    BadLength(usize),
    #[error("word of length {len} has weight {weight}, outside the middle levels")]
    BadWeight { len: usize, weight: usize },
    #[error("{0} is not a Dyck word")]
    NotDyck(String),
    #[error("word {word} does not match the {pattern} pattern")]
    PatternMismatch { word: String, pattern: &'static str },
    #[error("the star / footed-star pair is excluded from gluing")]
    ExcludedStarPair,
    #[error("the star tree has no gluing selection")]
    StarTree,
    #[error("n = {0} is out of range for this operation")]
    UnsupportedN(usize),
    #[error("shift {shift} is not coprime to {modulus}")]
    NonCoprimeShift { shift: i64, modulus: u64 },
    #[error("invalid start combination: {0}")]
    BadStart(String),
    #[error("switch rejected: {0}")]
    SwitchAxiom(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
}
