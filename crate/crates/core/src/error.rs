use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("object `{0}` is not declared in this universe")]
    UndeclaredObject(String),
    #[error("object `{0}` is declared twice")]
    DuplicateObject(String),
    #[error("concept `{0}` is declared twice")]
    DuplicateConcept(String),
    #[error("relation `{0}` is declared twice")]
    DuplicateRelation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquinumError {
    #[error("concept of size {size} exceeds the enumeration cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("allowed pair ({source_obj}, {target_obj}) lies outside F x G")]
    MalformedRestriction {
        source_obj: String,
        target_obj: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("concept `{0}` references objects outside the registry's universe")]
    ForeignUniverse(String),
    #[error("the universe declares no object to witness a singleton")]
    EmptyUniverse,
    #[error("concept name `{0}` is already registered with a different extension")]
    NameConflict(String),
    #[error("self-projection over `{0}` failed validation")]
    SelfProjectionRejected(String),
}
