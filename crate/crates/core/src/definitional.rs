//! Cross-checks between the correspondence definition of equinumerosity (in
//! its projection and binding readings) and the classical bijection
//! definition, over finite concepts.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equinum::{count_phi, enumerate_phi, factorial, search_phi, PhiCount};
use crate::error::EquinumError;
use crate::laws::{
    is_exclusive, is_functional, is_total_on, is_valid_binding, is_valid_projection,
};
use crate::model::{Concept, Correspondence, DirectedRelation, ObjectId, Universe};

/// A single relation that is functional, exclusive, total on `f`, onto `g`,
/// and stays inside `f` x `g`.
pub fn is_bijection(b: &DirectedRelation, f: &Concept, g: &Concept) -> bool {
    is_functional(b)
        && is_exclusive(b)
        && b.pairs().all(|(s, t)| f.contains(s) && g.contains(t))
        && is_total_on(b, f)
        && is_total_on(&b.reverse(), g)
}

/// Depth-first walk over exclusive partial assignments F to G, calling
/// `leaf` on every complete assignment until it returns false.
fn walk_bijections<L>(f: &Concept, g: &Concept, mut leaf: L)
where
    L: FnMut(&DirectedRelation) -> bool,
{
    fn go<L: FnMut(&DirectedRelation) -> bool>(
        i: usize,
        sources: &[&ObjectId],
        targets: &[&ObjectId],
        used: &mut [bool],
        chosen: &mut Vec<(ObjectId, ObjectId)>,
        leaf: &mut L,
    ) -> bool {
        if i == sources.len() {
            return leaf(&DirectedRelation::from_pairs(chosen.iter().cloned()));
        }
        for (j, t) in targets.iter().enumerate() {
            if used[j] {
                continue;
            }
            used[j] = true;
            chosen.push((sources[i].clone(), (*t).clone()));
            let keep_going = go(i + 1, sources, targets, used, chosen, leaf);
            chosen.pop();
            used[j] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }
    let sources: Vec<_> = f.members().collect();
    let targets: Vec<_> = g.members().collect();
    let mut used = vec![false; targets.len()];
    go(0, &sources, &targets, &mut used, &mut Vec::new(), &mut leaf);
}

/// Searches for a bijection between `f` and `g`.
///
/// The walk only prunes on exclusivity, so concepts of different sizes cost
/// up to `|G|! / (|G| - |F|)!` leaves.
pub fn bijection_exists(f: &Concept, g: &Concept) -> bool {
    let mut found = false;
    walk_bijections(f, g, |b| {
        found = is_bijection(b, f, g);
        !found
    });
    found
}

pub fn count_bijections(f: &Concept, g: &Concept, cap: usize) -> Result<u64, EquinumError> {
    if let Some(size) = [f.len(), g.len()].into_iter().find(|&n| n > cap) {
        return Err(EquinumError::CapExceeded { size, cap });
    }
    let mut count = 0;
    walk_bijections(f, g, |b| {
        if is_bijection(b, f, g) {
            count += 1;
        }
        true
    });
    Ok(count)
}

/// A valid correspondence whose backward relation is not the converse of its
/// forward relation.
///
/// This is the first such correspondence in enumeration order: the
/// ordinal-ordered forward mapping, with the backward mapping that reverses it
/// except for the last two members of `g`, which swap their targets.
pub fn find_nonreciprocal_phi(f: &Concept, g: &Concept) -> Option<Correspondence> {
    let n = f.len();
    if n != g.len() || n < 2 {
        return None;
    }
    let fs: Vec<_> = f.members().cloned().collect();
    let gs: Vec<_> = g.members().cloned().collect();
    let forward = DirectedRelation::from_pairs(fs.iter().cloned().zip(gs.iter().cloned()));
    let mut targets = fs;
    targets.swap(n - 2, n - 1);
    let backward = DirectedRelation::from_pairs(gs.into_iter().zip(targets));
    Some(Correspondence::from_parts(forward, backward))
}

/// Produces the pair of concepts examined for each cell of a report.
pub trait ConceptPairSource {
    fn pair(&mut self, size_f: usize, size_g: usize) -> (Universe, Concept, Concept);
}

/// Disjoint fresh concepts `{f0, ..}` and `{g0, ..}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalPairs;

impl ConceptPairSource for CanonicalPairs {
    fn pair(&mut self, size_f: usize, size_g: usize) -> (Universe, Concept, Concept) {
        let names = (0..size_f)
            .map(|i| format!("f{i}"))
            .chain((0..size_g).map(|i| format!("g{i}")));
        let u = Universe::with_objects(Some("canonical"), names).expect("distinct names");
        let f = Concept::new(&u, "F", u.objects()[..size_f].iter().cloned()).expect("own objects");
        let g = Concept::new(&u, "G", u.objects()[size_f..].iter().cloned()).expect("own objects");
        (u, f, g)
    }
}

/// Concepts drawn at random from a shuffled universe with spare objects; F
/// and G may overlap.
#[derive(Clone, Debug)]
pub struct SeededPairs {
    rng: ChaCha8Rng,
}

impl SeededPairs {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl ConceptPairSource for SeededPairs {
    fn pair(&mut self, size_f: usize, size_g: usize) -> (Universe, Concept, Concept) {
        let total = size_f.max(size_g) + 2;
        let mut names: Vec<String> = (0..total).map(|i| format!("o{i}")).collect();
        names.shuffle(&mut self.rng);
        let u = Universe::with_objects(Some("seeded"), &names).expect("distinct names");
        let pick = |rng: &mut ChaCha8Rng, k: usize| {
            u.objects()
                .choose_multiple(rng, k)
                .cloned()
                .collect::<Vec<_>>()
        };
        let fo = pick(&mut self.rng, size_f);
        let go = pick(&mut self.rng, size_g);
        let f = Concept::new(&u, "F", fo).expect("own objects");
        let g = Concept::new(&u, "G", go).expect("own objects");
        (u, f, g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportCell {
    pub size_f: usize,
    pub size_g: usize,
    pub projection: bool,
    pub binding: bool,
    pub bijection: bool,
    pub cardinality: bool,
}

impl ReportCell {
    fn verdicts(&self) -> [(&'static str, bool); 4] {
        [
            ("projection", self.projection),
            ("binding", self.binding),
            ("bijection", self.bijection),
            ("cardinality", self.cardinality),
        ]
    }
}

/// A disagreement between definitions on one cell, or between an enumerated
/// count and its closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub size_f: usize,
    pub size_g: usize,
    pub definitions: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub max_size: usize,
    pub cells: Vec<ReportCell>,
    pub discrepancies: Vec<Discrepancy>,
    /// Enumerated number of correspondences for sizes `0..=max_size`.
    pub phi_counts: Vec<PhiCount>,
    /// Enumerated number of bijections for sizes `0..=max_size`.
    pub bijection_counts: Vec<PhiCount>,
}

impl EquivalenceReport {
    pub fn is_consistent(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Evaluates every size pair up to `max_size` with four tests: brute-force
/// existence under the projection predicate, the same under the binding
/// predicate, bijection search, and size equality. Also enumerates
/// correspondences and bijections on the diagonal and compares them with the
/// closed forms.
pub fn equivalence_report<S: ConceptPairSource>(
    source: &mut S,
    max_size: usize,
    cap: usize,
) -> Result<EquivalenceReport, EquinumError> {
    if max_size > cap {
        return Err(EquinumError::CapExceeded {
            size: max_size,
            cap,
        });
    }
    let mut cells = Vec::new();
    let mut discrepancies = Vec::new();
    for size_f in 0..=max_size {
        for size_g in 0..=max_size {
            let (_, f, g) = source.pair(size_f, size_g);
            let cell = ReportCell {
                size_f,
                size_g,
                projection: search_phi(&f, &g, is_valid_projection, cap)?.is_some(),
                binding: search_phi(&f, &g, is_valid_binding, cap)?.is_some(),
                bijection: bijection_exists(&f, &g),
                cardinality: size_f == size_g,
            };
            let dissent: Vec<String> = cell
                .verdicts()
                .iter()
                .filter(|(_, v)| *v != cell.cardinality)
                .map(|(name, _)| (*name).to_owned())
                .collect();
            if !dissent.is_empty() {
                discrepancies.push(Discrepancy {
                    size_f,
                    size_g,
                    definitions: dissent,
                    detail: "verdict differs from size equality".to_owned(),
                });
            }
            cells.push(cell);
        }
    }

    let mut phi_counts = Vec::new();
    let mut bijection_counts = Vec::new();
    for n in 0..=max_size {
        let (_, f, g) = source.pair(n, n);
        let enumerated = PhiCount::from(enumerate_phi(&f, &g, cap)?.count() as u64);
        let closed = count_phi(&f, &g);
        let expected = factorial(n) * factorial(n);
        if enumerated.0 != expected || closed.0 != expected {
            discrepancies.push(Discrepancy {
                size_f: n,
                size_g: n,
                definitions: vec!["phi_count".to_owned()],
                detail: format!(
                    "enumerated {enumerated}, closed form {closed}, expected {expected}"
                ),
            });
        }
        let bijections = PhiCount::from(count_bijections(&f, &g, cap)?);
        if bijections.0 != factorial(n) {
            discrepancies.push(Discrepancy {
                size_f: n,
                size_g: n,
                definitions: vec!["bijection_count".to_owned()],
                detail: format!("enumerated {bijections}, expected {}", factorial(n)),
            });
        }
        phi_counts.push(enumerated);
        bijection_counts.push(bijections);
    }

    Ok(EquivalenceReport {
        max_size,
        cells,
        discrepancies,
        phi_counts,
        bijection_counts,
    })
}
