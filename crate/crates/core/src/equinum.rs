//! Deciding, enumerating, counting and certifying correspondences between two
//! concepts.
//!
//! A correspondence is valid when its forward relation is a total exclusive
//! mapping F to G and its backward relation, chosen independently, is a total
//! exclusive mapping G to F. For finite concepts one exists exactly when the
//! concepts have the same size, and there are then `(n!)^2` of them.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::EquinumError;
use crate::laws::is_valid_projection;
use crate::matching::{saturate_left, Saturation};
use crate::model::{Certificate, Concept, Correspondence, DirectedRelation, ObjectId, Side};

/// Largest concept size for which correspondences are enumerated by default.
/// At 6 the stream already holds 518 400 correspondences.
pub const DEFAULT_ENUM_CAP: usize = 6;

/// A yes/no answer together with the evidence for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub holds: bool,
    pub certificate: Certificate,
}

/// How [`exists_phi_by`] reaches its verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Compare sizes and build the ordinal-ordered witness.
    Cardinality,
    /// Search all pairs of total functions with the projection predicate.
    BruteForce { cap: usize },
}

/// Exact number of valid correspondences.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhiCount(pub BigUint);

impl PhiCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for PhiCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for PhiCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl From<u64> for PhiCount {
    fn from(v: u64) -> Self {
        PhiCount(BigUint::from(v))
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

fn mismatch(f: &Concept, g: &Concept) -> Decision {
    Decision {
        holds: false,
        certificate: Certificate::CardinalityMismatch {
            size_f: f.len(),
            size_g: g.len(),
        },
    }
}

/// Pairs the i-th member of F with the i-th member of G (ordinal order) in
/// both directions. Only meaningful when the sizes agree.
pub fn ordinal_witness(f: &Concept, g: &Concept) -> Correspondence {
    let forward = DirectedRelation::from_pairs(f.members().cloned().zip(g.members().cloned()));
    let backward = forward.reverse();
    Correspondence::from_parts(forward, backward)
}

/// Decides whether a valid correspondence between `f` and `g` exists.
pub fn exists_phi(f: &Concept, g: &Concept) -> Decision {
    if f.len() != g.len() {
        return mismatch(f, g);
    }
    Decision {
        holds: true,
        certificate: Certificate::witness(ordinal_witness(f, g)),
    }
}

pub fn exists_phi_by(f: &Concept, g: &Concept, method: Method) -> Result<Decision, EquinumError> {
    match method {
        Method::Cardinality => Ok(exists_phi(f, g)),
        Method::BruteForce { cap } => Ok(match search_phi(f, g, is_valid_projection, cap)? {
            Some(phi) => Decision {
                holds: true,
                certificate: Certificate::witness(phi),
            },
            None => mismatch(f, g),
        }),
    }
}

fn check_cap(f: &Concept, g: &Concept, cap: usize) -> Result<(), EquinumError> {
    match [f.len(), g.len()].into_iter().find(|&n| n > cap) {
        Some(size) => Err(EquinumError::CapExceeded { size, cap }),
        None => Ok(()),
    }
}

/// Every total function from `from` into `to`, as relations, in
/// lexicographic order of target ordinals.
pub fn total_functions(from: &Concept, to: &Concept) -> TotalFunctions {
    let sources: Vec<_> = from.members().cloned().collect();
    let targets: Vec<_> = to.members().cloned().collect();
    let done = targets.is_empty() && !sources.is_empty();
    TotalFunctions {
        digits: vec![0; sources.len()],
        sources,
        targets,
        done,
    }
}

/// Odometer over `|to|^|from|` assignments.
#[derive(Clone, Debug)]
pub struct TotalFunctions {
    sources: Vec<ObjectId>,
    targets: Vec<ObjectId>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for TotalFunctions {
    type Item = DirectedRelation;

    fn next(&mut self) -> Option<DirectedRelation> {
        if self.done {
            return None;
        }
        let rel = DirectedRelation::from_pairs(
            self.sources
                .iter()
                .zip(&self.digits)
                .map(|(s, &d)| (s.clone(), self.targets[d].clone())),
        );
        // advance, least significant digit last
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.targets.len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(rel)
    }
}

/// Exhaustive search for a correspondence accepted by `valid`, trying every
/// total function F to G against every total function G to F.
///
/// Cost is `|G|^|F| * |F|^|G|` predicate calls in the worst case.
pub fn search_phi<P>(
    f: &Concept,
    g: &Concept,
    valid: P,
    cap: usize,
) -> Result<Option<Correspondence>, EquinumError>
where
    P: Fn(&Correspondence, &Concept, &Concept) -> bool,
{
    check_cap(f, g, cap)?;
    let mut backward: Vec<_> = total_functions(g, f).collect();
    for fwd in total_functions(f, g) {
        let mut phi = Correspondence::from_parts(fwd, DirectedRelation::empty());
        for bwd in backward.iter_mut() {
            // candidates are swapped in and out rather than cloned
            phi.swap_backward(bwd);
            let ok = valid(&phi, f, g);
            phi.swap_backward(bwd);
            if ok {
                phi.swap_backward(bwd);
                return Ok(Some(phi));
            }
        }
    }
    Ok(None)
}

/// Streams every valid correspondence exactly once, ordered by forward pairs
/// then backward pairs under object ordinals.
pub fn enumerate_phi(f: &Concept, g: &Concept, cap: usize) -> Result<PhiEnumeration, EquinumError> {
    check_cap(f, g, cap)?;
    let sizes_match = f.len() == g.len();
    let n = f.len();
    Ok(PhiEnumeration {
        f: f.members().cloned().collect(),
        g: g.members().cloned().collect(),
        forward: sizes_match.then(|| (0..n).collect()),
        backward: (0..n).collect(),
    })
}

#[derive(Clone, Debug)]
pub struct PhiEnumeration {
    f: Vec<ObjectId>,
    g: Vec<ObjectId>,
    /// Targets in G for each member of F; `None` once exhausted.
    forward: Option<Vec<usize>>,
    backward: Vec<usize>,
}

/// Rearranges `p` into the next permutation in lexicographic order; returns
/// false (leaving `p` sorted ascending) when `p` was the last one.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        p.reverse();
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn mapping(sources: &[ObjectId], targets: &[ObjectId], perm: &[usize]) -> DirectedRelation {
    DirectedRelation::from_pairs(
        sources
            .iter()
            .zip(perm)
            .map(|(s, &t)| (s.clone(), targets[t].clone())),
    )
}

impl Iterator for PhiEnumeration {
    type Item = Correspondence;

    fn next(&mut self) -> Option<Correspondence> {
        let fwd = self.forward.as_mut()?;
        let phi = Correspondence::from_parts(
            mapping(&self.f, &self.g, fwd),
            mapping(&self.g, &self.f, &self.backward),
        );
        if !next_permutation(&mut self.backward) && !next_permutation(fwd) {
            self.forward = None;
        }
        Some(phi)
    }
}

/// Closed-form count: `(n!)^2` when both concepts have size `n`, else 0.
pub fn count_phi(f: &Concept, g: &Concept) -> PhiCount {
    if f.len() != g.len() {
        return PhiCount(BigUint::zero());
    }
    let n = factorial(f.len());
    PhiCount(&n * &n)
}

/// Existence of a correspondence whose forward pairs are drawn from `allowed`
/// and whose backward pairs are drawn from its converse, each direction
/// chosen on its own.
pub fn exists_phi_within(
    f: &Concept,
    g: &Concept,
    allowed: &DirectedRelation,
) -> Result<Decision, EquinumError> {
    if let Some((s, t)) = allowed
        .pairs()
        .find(|(s, t)| !f.contains(s) || !g.contains(t))
    {
        return Err(EquinumError::MalformedRestriction {
            source_obj: s.symbol().to_owned(),
            target_obj: t.symbol().to_owned(),
        });
    }
    if f.len() != g.len() {
        return Ok(mismatch(f, g));
    }
    let forward = match saturate_left(f.extension(), g.extension(), allowed) {
        Saturation::Perfect(m) => m,
        Saturation::Deficient(objects) => return Ok(deficient(Side::F, objects)),
    };
    let backward = match saturate_left(g.extension(), f.extension(), &allowed.reverse()) {
        Saturation::Perfect(m) => m,
        Saturation::Deficient(objects) => return Ok(deficient(Side::G, objects)),
    };
    Ok(Decision {
        holds: true,
        certificate: Certificate::witness(Correspondence::from_parts(forward, backward)),
    })
}

fn deficient(side: Side, objects: BTreeSet<ObjectId>) -> Decision {
    Decision {
        holds: false,
        certificate: Certificate::DeficiencySet { side, objects },
    }
}
