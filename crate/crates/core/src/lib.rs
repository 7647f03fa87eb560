//! Laboratory for finite posets and Hom-schemes.
//!
//! The crate builds finite posets, enumerates (strict) homomorphisms between
//! them, constructs EV-systems, and checks calculation and cancellation rules
//! for strong Hom-, G-, and I-schemes by exhaustive enumeration over catalogs
//! of small posets. Every check either holds at an explicit bound or is
//! refuted with a machine-checkable witness.

pub mod bitset;
pub mod canon;
pub mod cancel;
pub mod catalog;
pub mod cli;
pub mod config;
pub mod error;
pub mod ev;
pub mod hom;
pub mod io;
pub mod poset;
pub mod report;
pub mod scheme;
pub mod verify;

pub use bitset::ElemSet;
pub use error::{Error, Result};
pub use poset::Poset;
