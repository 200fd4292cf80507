//! Numbers as equivalence classes of concepts under equinumerosity.
//!
//! A [`NumberRegistry`] collects concepts over one universe and sorts them
//! into classes: a new concept joins the class of any representative it is
//! equinumerous with, otherwise it opens a class of its own. Class ids are the
//! shared cardinality, so they are canonical across registries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::equinum::exists_phi;
use crate::error::RegistryError;
use crate::laws::is_valid_projection;
use crate::model::{Concept, Correspondence, DirectedRelation, ObjectId, Universe};

/// Canonical id of a class of equinumerous concepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NumberHandle(usize);

impl NumberHandle {
    pub fn new(class_id: usize) -> Self {
        Self(class_id)
    }

    pub fn class_id(self) -> usize {
        self.0
    }
}

impl fmt::Display for NumberHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug)]
struct Class {
    representative: Concept,
    members: BTreeSet<String>,
}

/// Registered concepts of one universe, partitioned by equinumerosity.
///
/// Registration needs `&mut self`; a registry can be moved between threads but
/// concurrent registration must be serialized by the caller.
#[derive(Clone, Debug)]
pub struct NumberRegistry {
    universe: Arc<Universe>,
    classes: BTreeMap<NumberHandle, Class>,
    by_name: BTreeMap<String, (NumberHandle, BTreeSet<ObjectId>)>,
}

const EMPTY_NAME: &str = "<empty>";

impl NumberRegistry {
    pub fn new(universe: Arc<Universe>) -> Self {
        Self {
            universe,
            classes: BTreeMap::new(),
            by_name: BTreeMap::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// The number belonging to `f`: the handle of its class, registering `f`
    /// on first sight.
    pub fn number_of(&mut self, f: &Concept) -> Result<NumberHandle, RegistryError> {
        if !f.members().all(|o| self.universe.contains(o)) {
            return Err(RegistryError::ForeignUniverse(f.name().to_owned()));
        }
        if let Some((handle, ext)) = self.by_name.get(f.name()) {
            return if ext == f.extension() {
                Ok(*handle)
            } else {
                Err(RegistryError::NameConflict(f.name().to_owned()))
            };
        }
        let existing = self
            .classes
            .iter()
            .find(|(_, class)| exists_phi(f, &class.representative).holds)
            .map(|(h, _)| *h);
        let handle = existing.unwrap_or(NumberHandle(f.len()));
        self.classes
            .entry(handle)
            .or_insert_with(|| Class {
                representative: f.clone(),
                members: BTreeSet::new(),
            })
            .members
            .insert(f.name().to_owned());
        self.by_name
            .insert(f.name().to_owned(), (handle, f.extension().clone()));
        Ok(handle)
    }

    /// Whether some registered concept has `n` as its number.
    pub fn is_number(&self, n: NumberHandle) -> bool {
        self.classes.get(&n).is_some_and(|c| !c.members.is_empty())
    }

    /// Names of the concepts registered under `n`, sorted.
    pub fn members(&self, n: NumberHandle) -> impl Iterator<Item = &str> {
        self.classes
            .get(&n)
            .into_iter()
            .flat_map(|c| c.members.iter().map(String::as_str))
    }

    pub fn classes(&self) -> impl Iterator<Item = NumberHandle> + '_ {
        self.classes.keys().copied()
    }

    /// Number of registered concepts.
    pub fn len(&self) -> usize {
        self.by_name.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_name.is_empty()
    }

    /// The number of the empty concept.
    pub fn zero(&mut self) -> NumberHandle {
        let empty = Concept::from_parts(EMPTY_NAME.to_owned(), BTreeSet::new());
        self.number_of(&empty)
            .expect("the empty concept belongs to every universe")
    }

    /// The number of a singleton concept, after checking that the first
    /// declared object's self-loop is a valid correspondence over `{a}`.
    pub fn one(&mut self) -> Result<NumberHandle, RegistryError> {
        let a = self
            .universe
            .objects()
            .first()
            .cloned()
            .ok_or(RegistryError::EmptyUniverse)?;
        let name = format!("<singleton {a}>");
        let singleton = Concept::from_parts(name, BTreeSet::from([a.clone()]));
        if !is_valid_projection(&self_projection(&a), &singleton, &singleton) {
            return Err(RegistryError::SelfProjectionRejected(a.symbol().to_owned()));
        }
        self.number_of(&singleton)
    }
}

/// The relation accompanying zero: no projection at all, hence no reflection.
pub fn zero_witness() -> Correspondence {
    Correspondence::empty()
}

/// The correspondence in which `a` projects onto itself in both directions.
pub fn self_projection(a: &ObjectId) -> Correspondence {
    let loop_ = DirectedRelation::from_pairs([(a.clone(), a.clone())]);
    Correspondence::from_parts(loop_.clone(), loop_)
}

/// Object-level reading of one: within `r`, `a` projects onto itself and
/// onto nothing else.
pub fn projects_onto_itself(r: &DirectedRelation, a: &ObjectId) -> bool {
    let mut image = r.image(a);
    image.next() == Some(a) && image.next().is_none()
}

/// Object-level reading of zero: within `r`, `a` projects onto no object and
/// nothing projects onto it.
pub fn projects_onto_nothing(r: &DirectedRelation, a: &ObjectId) -> bool {
    r.pairs().all(|(s, t)| s != a && t != a)
}
