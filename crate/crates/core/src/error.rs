use num_bigint::BigInt;
use thiserror::Error;

use crate::kdelta::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation requires a finite group, got one with {free_rank} free summand(s)")]
    InfiniteGroup { free_rank: usize },

    #[error("invalid invariant factors: {0}")]
    InvalidFactors(String),

    #[error("element does not belong to the class group: {0}")]
    ClassMismatch(String),

    #[error("prime {label} has even norm {norm}; the inductive quotient needs odd norms")]
    EvenNormPrime { label: Label, norm: BigInt },

    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error("unknown label {0}")]
    UnknownLabel(String),

    #[error("malformed bundle: {0}")]
    MalformedBundle(String),

    #[error("bundle has no entry for label set {0:?}")]
    MissingEntry(Vec<Label>),

    #[error("entry for {labels:?} is not homogeneous: {group}")]
    NonHomogeneousEntry { labels: Vec<Label>, group: String },

    #[error("entry for {labels:?} has a free summand")]
    FreeSummandInEntry { labels: Vec<Label> },

    #[error("entry for {labels:?}: {value} is not a perfect {exponent}-th power")]
    NotPerfectPower {
        labels: Vec<Label>,
        value: BigInt,
        exponent: usize,
    },

    #[error("entry for {labels:?} yields norm {norm}, which is not a prime power")]
    RecoveredNormNotPrimePower { labels: Vec<Label>, norm: BigInt },

    #[error(
        "insufficient generators: recovered group of order {recovered} but class number is {class_number}; \
         supply more odd-norm prime labels (raise the prime bound)"
    )]
    InsufficientGenerators {
        recovered: BigInt,
        class_number: usize,
    },

    #[error("norm {0} is below 2")]
    NormBelowTwo(BigInt),

    #[error("invalid discriminant {0}: {1}")]
    InvalidDiscriminant(i64, String),

    #[error("prime {0} is inert; its ideal is principal")]
    InertPrime(u64),

    #[error("norm {0} is not a prime power")]
    NonPrimePowerNorm(BigInt),

    #[error("odd-norm prime classes generate a subgroup of index {index} in the class group")]
    OddNormClassesDoNotGenerate { index: BigInt },

    #[error("quotient too large for naive enumeration: {0}")]
    QuotientTooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
