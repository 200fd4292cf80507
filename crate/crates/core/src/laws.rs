//! Decidable predicates for the exclusivity laws of projection/reflection and
//! of binding.
//!
//! Both vocabularies share one kernel, [`is_valid_correspondence`]; the
//! facades [`is_valid_projection`] and [`is_valid_binding`] only name it.

use std::collections::BTreeSet;

use crate::model::{Concept, Correspondence, DirectedRelation, ObjectId};

/// No source is paired with two distinct targets.
pub fn is_functional(r: &DirectedRelation) -> bool {
    // Pairs are sorted by source, so a repeated source shows up adjacently.
    let mut pairs = r.pairs();
    let Some(mut prev) = pairs.next() else {
        return true;
    };
    for pair in pairs {
        if pair.0 == prev.0 {
            return false;
        }
        prev = pair;
    }
    true
}

/// No target receives two distinct sources.
pub fn is_exclusive(r: &DirectedRelation) -> bool {
    let mut seen = BTreeSet::new();
    r.pairs().all(|(_, t)| seen.insert(t))
}

/// Every object of `c` is the source of some pair.
pub fn is_total_on(r: &DirectedRelation, c: &Concept) -> bool {
    // Both sides are sorted by ordinal: merge instead of building a set.
    let mut sources = r.pairs().map(|(s, _)| s).peekable();
    c.members().all(|o| {
        while sources.next_if(|s| *s < o).is_some() {}
        sources.peek() == Some(&o)
    })
}

/// A total, functional, exclusive mapping from `from` into `to`.
pub fn is_injective_mapping(r: &DirectedRelation, from: &Concept, to: &Concept) -> bool {
    is_functional(r)
        && is_exclusive(r)
        && r.pairs().all(|(s, t)| from.contains(s) && to.contains(t))
        && is_total_on(r, from)
}

/// Shared kernel: the forward relation is an injective mapping F to G and,
/// independently, the backward relation is an injective mapping G to F.
/// Nothing ties the backward relation to the converse of the forward one.
pub fn is_valid_correspondence(phi: &Correspondence, f: &Concept, g: &Concept) -> bool {
    is_injective_mapping(phi.forward(), f, g) && is_injective_mapping(phi.backward(), g, f)
}

/// Validity read as projection (forward) and reflection of the projection
/// from the other side (backward).
pub fn is_valid_projection(phi: &Correspondence, f: &Concept, g: &Concept) -> bool {
    is_valid_correspondence(phi, f, g)
}

/// Validity read as `stringTo` (forward) and `stringFrom` (backward) bindings.
pub fn is_valid_binding(phi: &Correspondence, f: &Concept, g: &Concept) -> bool {
    is_valid_correspondence(phi, f, g)
}

/// A pair of pairs witnessing that a law is broken.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub shared: ObjectId,
    pub first: ObjectId,
    pub second: ObjectId,
}

/// Sources mapped to more than one target, with the first two targets found.
pub fn functional_violations(r: &DirectedRelation) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut pairs = r.pairs().peekable();
    while let Some((s, t)) = pairs.next() {
        if let Some((s2, t2)) = pairs.peek() {
            if s == s2 && out.last().is_none_or(|v: &Violation| &v.shared != s) {
                out.push(Violation {
                    shared: s.clone(),
                    first: t.clone(),
                    second: t2.clone(),
                });
            }
        }
    }
    out
}

/// Targets reached from more than one source, with the first two sources found.
pub fn exclusive_violations(r: &DirectedRelation) -> Vec<Violation> {
    functional_violations(&r.reverse())
}
