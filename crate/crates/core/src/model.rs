//! Value types shared by every other module: objects, universes, concepts,
//! directed relations, correspondences and certificates.
//!
//! Objects are interned per universe and carry their declaration ordinal, so
//! every ordered collection in this crate iterates in declaration order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Serialize, Serializer};

use crate::error::ModelError;

/// An interned object. Ordering follows declaration order within its universe.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectId {
    ordinal: usize,
    symbol: Arc<str>,
}

impl ObjectId {
    pub fn ordinal(&self) -> usize {
        self.ordinal
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }
}

impl fmt::Debug for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.symbol, self.ordinal)
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)
    }
}

impl Serialize for ObjectId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.symbol)
    }
}

/// A finite domain of objects together with the named concepts and relations
/// declared over it. Immutable once built; see [`UniverseBuilder`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    name: Option<String>,
    objects: Vec<ObjectId>,
    index: HashMap<Arc<str>, usize>,
    concepts: IndexMap<String, Concept>,
    relations: IndexMap<String, DirectedRelation>,
}

impl Universe {
    pub fn builder(name: Option<&str>) -> UniverseBuilder {
        UniverseBuilder {
            name: name.map(str::to_owned),
            objects: Vec::new(),
            index: HashMap::new(),
            concepts: IndexMap::new(),
            relations: IndexMap::new(),
        }
    }

    /// Shorthand for a universe holding only the given objects.
    pub fn with_objects<I, S>(name: Option<&str>, symbols: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut builder = Self::builder(name);
        for s in symbols {
            builder.declare_object(s.as_ref())?;
        }
        Ok(builder.build())
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn objects(&self) -> &[ObjectId] {
        &self.objects
    }

    pub fn object(&self, symbol: &str) -> Option<&ObjectId> {
        self.index.get(symbol).map(|&i| &self.objects[i])
    }

    /// Looks up several objects by symbol at once.
    pub fn objects_named<'a, I>(&self, symbols: I) -> Result<Vec<ObjectId>, ModelError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        symbols
            .into_iter()
            .map(|s| {
                self.object(s)
                    .cloned()
                    .ok_or_else(|| ModelError::UndeclaredObject(s.to_owned()))
            })
            .collect()
    }

    pub fn contains(&self, id: &ObjectId) -> bool {
        self.objects.get(id.ordinal) == Some(id)
    }

    pub fn concept(&self, name: &str) -> Option<&Concept> {
        self.concepts.get(name)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    pub fn relation(&self, name: &str) -> Option<&DirectedRelation> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &DirectedRelation)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn check(&self, id: &ObjectId) -> Result<(), ModelError> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(ModelError::UndeclaredObject(id.symbol().to_owned()))
        }
    }
}

/// Incremental construction of a [`Universe`]. Objects must be declared
/// before any concept or relation mentions them.
#[derive(Debug)]
pub struct UniverseBuilder {
    name: Option<String>,
    objects: Vec<ObjectId>,
    index: HashMap<Arc<str>, usize>,
    concepts: IndexMap<String, Concept>,
    relations: IndexMap<String, DirectedRelation>,
}

impl UniverseBuilder {
    pub fn declare_object(&mut self, symbol: &str) -> Result<ObjectId, ModelError> {
        if self.index.contains_key(symbol) {
            return Err(ModelError::DuplicateObject(symbol.to_owned()));
        }
        let id = ObjectId {
            ordinal: self.objects.len(),
            symbol: Arc::from(symbol),
        };
        self.index.insert(id.symbol.clone(), id.ordinal);
        self.objects.push(id.clone());
        Ok(id)
    }

    pub fn lookup(&self, symbol: &str) -> Option<&ObjectId> {
        self.index.get(symbol).map(|&i| &self.objects[i])
    }

    pub fn has_concept(&self, name: &str) -> bool {
        self.concepts.contains_key(name)
    }

    pub fn has_relation(&self, name: &str) -> bool {
        self.relations.contains_key(name)
    }

    pub fn concept<'a, I>(&mut self, name: &str, members: I) -> Result<&Concept, ModelError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        if self.concepts.contains_key(name) {
            return Err(ModelError::DuplicateConcept(name.to_owned()));
        }
        let extension = members
            .into_iter()
            .map(|s| self.resolve(s))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let concept = Concept {
            name: name.to_owned(),
            extension,
        };
        Ok(self.concepts.entry(name.to_owned()).or_insert(concept))
    }

    pub fn relation<'a, I>(&mut self, name: &str, pairs: I) -> Result<&DirectedRelation, ModelError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        if self.relations.contains_key(name) {
            return Err(ModelError::DuplicateRelation(name.to_owned()));
        }
        let pairs = pairs
            .into_iter()
            .map(|(s, t)| Ok((self.resolve(s)?, self.resolve(t)?)))
            .collect::<Result<BTreeSet<_>, ModelError>>()?;
        Ok(self
            .relations
            .entry(name.to_owned())
            .or_insert(DirectedRelation { pairs }))
    }

    pub fn build(self) -> Universe {
        Universe {
            name: self.name,
            objects: self.objects,
            index: self.index,
            concepts: self.concepts,
            relations: self.relations,
        }
    }

    fn resolve(&self, symbol: &str) -> Result<ObjectId, ModelError> {
        self.lookup(symbol)
            .cloned()
            .ok_or_else(|| ModelError::UndeclaredObject(symbol.to_owned()))
    }
}

/// A named finite set of objects: the objects falling under the concept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Concept {
    name: String,
    extension: BTreeSet<ObjectId>,
}

impl Concept {
    pub fn new<I>(universe: &Universe, name: &str, objects: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = ObjectId>,
    {
        let extension = objects
            .into_iter()
            .map(|o| universe.check(&o).map(|_| o))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(Self {
            name: name.to_owned(),
            extension,
        })
    }

    pub(crate) fn from_parts(name: String, extension: BTreeSet<ObjectId>) -> Self {
        Self { name, extension }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn extension(&self) -> &BTreeSet<ObjectId> {
        &self.extension
    }

    pub fn contains(&self, id: &ObjectId) -> bool {
        self.extension.contains(id)
    }

    pub fn len(&self) -> usize {
        self.extension.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extension.is_empty()
    }

    /// Members in ordinal order.
    pub fn members(&self) -> impl ExactSizeIterator<Item = &ObjectId> + Clone {
        self.extension.iter()
    }
}

/// A finite set of ordered pairs `(source, target)`.
///
/// Pairs are kept sorted by `(source ordinal, target ordinal)`, which is the
/// lexicographic order every enumeration in this crate relies on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DirectedRelation {
    pairs: BTreeSet<(ObjectId, ObjectId)>,
}

impl DirectedRelation {
    pub fn new<I>(universe: &Universe, pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (ObjectId, ObjectId)>,
    {
        let pairs = pairs
            .into_iter()
            .map(|(s, t)| {
                universe.check(&s)?;
                universe.check(&t)?;
                Ok((s, t))
            })
            .collect::<Result<BTreeSet<_>, ModelError>>()?;
        Ok(Self { pairs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub(crate) fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (ObjectId, ObjectId)>,
    {
        Self {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = &(ObjectId, ObjectId)> + Clone {
        self.pairs.iter()
    }

    pub fn contains(&self, source: &ObjectId, target: &ObjectId) -> bool {
        // BTreeSet<(A, B)> cannot be probed with borrowed halves.
        self.pairs.contains(&(source.clone(), target.clone()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sources(&self) -> BTreeSet<&ObjectId> {
        self.pairs.iter().map(|(s, _)| s).collect()
    }

    pub fn targets(&self) -> BTreeSet<&ObjectId> {
        self.pairs.iter().map(|(_, t)| t).collect()
    }

    /// Targets paired with `source`, in ordinal order.
    pub fn image<'a>(&'a self, source: &'a ObjectId) -> impl Iterator<Item = &'a ObjectId> + 'a {
        self.pairs
            .iter()
            .filter(move |(s, _)| s == source)
            .map(|(_, t)| t)
    }

    /// The converse relation.
    pub fn reverse(&self) -> Self {
        Self::from_pairs(self.pairs.iter().map(|(s, t)| (t.clone(), s.clone())))
    }

    /// Relational composition: `(a, c)` whenever `(a, b) ∈ self` and `(b, c) ∈ next`.
    pub fn compose(&self, next: &DirectedRelation) -> Self {
        let mut out = BTreeSet::new();
        for (a, b) in &self.pairs {
            for c in next.image(b) {
                out.insert((a.clone(), c.clone()));
            }
        }
        Self { pairs: out }
    }

    pub fn is_subset(&self, other: &DirectedRelation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn with_pair(&self, source: ObjectId, target: ObjectId) -> Self {
        let mut pairs = self.pairs.clone();
        pairs.insert((source, target));
        Self { pairs }
    }
}

impl<'a> IntoIterator for &'a DirectedRelation {
    type Item = &'a (ObjectId, ObjectId);
    type IntoIter = std::collections::btree_set::Iter<'a, (ObjectId, ObjectId)>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

pub fn reverse(r: &DirectedRelation) -> DirectedRelation {
    r.reverse()
}

/// A candidate witness of equinumerosity: a forward relation (F to G) and a
/// backward relation (G to F), stored independently of each other.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Correspondence {
    forward: DirectedRelation,
    backward: DirectedRelation,
}

impl Correspondence {
    pub fn new(
        universe: &Universe,
        forward: DirectedRelation,
        backward: DirectedRelation,
    ) -> Result<Self, ModelError> {
        for (s, t) in forward.pairs().chain(backward.pairs()) {
            universe.check(s)?;
            universe.check(t)?;
        }
        Ok(Self { forward, backward })
    }

    pub(crate) fn from_parts(forward: DirectedRelation, backward: DirectedRelation) -> Self {
        Self { forward, backward }
    }

    pub fn empty() -> Self {
        Self::from_parts(DirectedRelation::empty(), DirectedRelation::empty())
    }

    pub(crate) fn swap_backward(&mut self, other: &mut DirectedRelation) {
        std::mem::swap(&mut self.backward, other);
    }

    /// Identity mapping in both directions over one concept.
    pub fn identity(concept: &Concept) -> Self {
        let id = DirectedRelation::from_pairs(concept.members().map(|o| (o.clone(), o.clone())));
        Self::from_parts(id.clone(), id)
    }

    pub fn forward(&self) -> &DirectedRelation {
        &self.forward
    }

    pub fn backward(&self) -> &DirectedRelation {
        &self.backward
    }

    /// Exchanges the two directions, turning an F-to-G correspondence into a
    /// G-to-F one.
    pub fn swapped(&self) -> Self {
        Self::from_parts(self.backward.clone(), self.forward.clone())
    }

    /// Chains `self` (F to G) with `next` (G to H) into an F-to-H correspondence.
    pub fn then(&self, next: &Correspondence) -> Self {
        Self::from_parts(
            self.forward.compose(&next.forward),
            next.backward.compose(&self.backward),
        )
    }

    /// Whether the backward relation is exactly the converse of the forward one.
    pub fn is_reciprocal(&self) -> bool {
        self.backward == self.forward.reverse()
    }
}

/// Which concept of a pair a certificate talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    F,
    G,
}

/// Evidence for or against equinumerosity of two concepts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Witness {
        forward: DirectedRelation,
        backward: DirectedRelation,
    },
    CardinalityMismatch {
        size_f: usize,
        size_g: usize,
    },
    DeficiencySet {
        side: Side,
        objects: BTreeSet<ObjectId>,
    },
}

impl Certificate {
    pub fn witness(phi: Correspondence) -> Self {
        Certificate::Witness {
            forward: phi.forward,
            backward: phi.backward,
        }
    }

    pub fn correspondence(&self) -> Option<Correspondence> {
        match self {
            Certificate::Witness { forward, backward } => Some(Correspondence::from_parts(
                forward.clone(),
                backward.clone(),
            )),
            _ => None,
        }
    }
}
