//! Crate-wide error type. Checks that *refute* a claim do not error; they
//! return a refuted verdict with a witness. Errors are for malformed inputs
//! and exhausted resource caps.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty carrier: the empty poset is not accepted here")]
    EmptyCarrier,
    #[error("relation is not reflexive at element {element}")]
    NotReflexive { element: usize },
    #[error("cycle detected between elements {a} and {b}")]
    CycleDetected { a: usize, b: usize },
    #[error("relation is not transitive: {a} <= {b} <= {c} but not {a} <= {c}")]
    NotTransitive { a: usize, b: usize, c: usize },
    #[error("unknown element label {label:?}")]
    UnknownLabel { label: String },
    #[error("duplicate element label {label:?}")]
    DuplicateLabel { label: String },
    #[error("element {element} is not a member of the given subset")]
    ElementNotInSet { element: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("search budget exceeded after {visited} visited nodes (cap {cap})")]
    SearchBudgetExceeded { visited: u64, cap: u64 },
    #[error("carriers overlap; the union of homomorphisms needs disjoint sources")]
    OverlappingCarriers,
    #[error("union of homomorphisms leaves element {element} unassigned")]
    CarrierNotCovered { element: usize },

    #[error("EV-system would have {predicted} elements, over the cap {cap}")]
    EvSizeCapExceeded { predicted: u128, cap: u64 },
    #[error("ambient poset is not the declared ordinal sum at split {split}")]
    NotAnOrdinalSum { split: usize },
    #[error("map is not defined on EV element #{index}")]
    EvMapUndefined { index: usize },
    #[error("map is not a strict EV homomorphism at pair ({a}, {b})")]
    NotStrictEvHom { a: usize, b: usize },
    #[error("verified assertion failed: {detail}")]
    AssertionFailed { detail: String },

    #[error("mapping is not injective: elements {a} and {b} share an image")]
    NotInjective { a: usize, b: usize },
    #[error("sets are not disjoint as required")]
    DisjointnessViolated,
    #[error("catalog is not closed under dualization (member {index})")]
    CatalogNotDualClosed { index: usize },
    #[error("no connected catalog member is isomorphic to a component of size {size}")]
    MissingComponentPoset { size: usize },
    #[error("pairwise comparison cap exceeded: {pairs} pairs over cap {cap}")]
    ComplexityCapExceeded { pairs: u64, cap: u64 },
    #[error("scheme image is not order-preserving and cannot enter a scheme table")]
    SchemeImageNotMonotone,
    #[error("ordinal-sum cancellation premise does not hold for this map")]
    PremiseFailed,
    #[error("cycle condition violated: distinct first arguments collide at b={b}")]
    Condition26Violated { b: usize },
    #[error("first-component injectivity violated on the scheme table")]
    Condition27Violated,
    #[error("constant-preservation condition violated on the scheme table")]
    Condition30Violated,
    #[error("poset {0} is not in the scheme table's catalog")]
    NotInCatalog(String),

    #[error("catalog bound {requested} exceeds the configured maximum {max}")]
    BoundTooLarge { requested: usize, max: usize },
    #[error("catalog cache is corrupt or has a wrong version: {0}")]
    BadCache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
