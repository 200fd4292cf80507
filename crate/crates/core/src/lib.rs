//! Finite-model engine for sameness of number.
//!
//! Two concepts have the same number when there is a correspondence between
//! them: a total exclusive mapping from the first into the second together
//! with an independent total exclusive mapping back. This crate decides,
//! enumerates, counts and certifies such correspondences, groups concepts
//! into numbers, checks the definition against the classical bijection one,
//! and reads and writes a small universe description language.

pub mod cardinal;
pub mod definitional;
pub mod dsl;
pub mod equinum;
pub mod error;
pub mod laws;
pub mod matching;
pub mod model;

pub use cardinal::{NumberHandle, NumberRegistry};
pub use equinum::{Decision, PhiCount, DEFAULT_ENUM_CAP};
pub use error::{EquinumError, ModelError, RegistryError};
pub use model::{Certificate, Concept, Correspondence, DirectedRelation, ObjectId, Side, Universe};
