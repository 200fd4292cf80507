//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use equinum_core::cardinal::self_projection;
use equinum_core::definitional::{
    bijection_exists, count_bijections, equivalence_report, find_nonreciprocal_phi, CanonicalPairs,
};
use equinum_core::dsl::{parse_universe, write_universe};
use equinum_core::equinum::{count_phi, enumerate_phi, exists_phi, exists_phi_within, factorial};
use equinum_core::laws::is_valid_projection;
use equinum_core::matching::neighbors;
use equinum_core::{
    Certificate, Concept, Correspondence, DirectedRelation, NumberRegistry, ObjectId, Side,
    Universe, DEFAULT_ENUM_CAP,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < budget, || {
        format!("took {took:.2?}, budget {budget:?}")
    })?;
    Ok(took)
}

/// Two disjoint concepts `{f0..}` and `{g0..}` in a fresh universe.
fn disjoint(size_f: usize, size_g: usize) -> (Universe, Concept, Concept) {
    let names = (0..size_f)
        .map(|i| format!("f{i}"))
        .chain((0..size_g).map(|i| format!("g{i}")));
    let u = Universe::with_objects(None, names).unwrap();
    let f = Concept::new(&u, "F", u.objects()[..size_f].to_vec()).unwrap();
    let g = Concept::new(&u, "G", u.objects()[size_f..].to_vec()).unwrap();
    (u, f, g)
}

fn random_concept(u: &Universe, name: &str, size: usize, rng: &mut ChaCha8Rng) -> Concept {
    let objs = u.objects().choose_multiple(rng, size).cloned();
    Concept::new(u, name, objs).unwrap()
}

/// A valid correspondence between equal-sized concepts, with forward and
/// backward drawn independently.
fn random_phi(u: &Universe, f: &Concept, g: &Concept, rng: &mut ChaCha8Rng) -> Correspondence {
    let mut gs: Vec<ObjectId> = g.members().cloned().collect();
    gs.shuffle(rng);
    let forward = DirectedRelation::new(u, f.members().cloned().zip(gs)).unwrap();
    let mut fs: Vec<ObjectId> = f.members().cloned().collect();
    fs.shuffle(rng);
    let backward = DirectedRelation::new(u, g.members().cloned().zip(fs)).unwrap();
    Correspondence::new(u, forward, backward).unwrap()
}

fn definitional_agreement() -> Check {
    let start = Instant::now();
    let report =
        equivalence_report(&mut CanonicalPairs, 5, DEFAULT_ENUM_CAP).map_err(|e| e.to_string())?;
    ensure(report.cells.len() == 36, || {
        format!("{} cells", report.cells.len())
    })?;
    ensure(report.discrepancies.is_empty(), || {
        format!(
            "{} discrepancies: {:?}",
            report.discrepancies.len(),
            report.discrepancies
        )
    })?;
    let took = within_budget(start, Duration::from_secs(10))?;
    Ok(format!("36 cells, 0 discrepancies in {took:.2?}"))
}

fn multiplicity() -> Check {
    let want_phi = [1u64, 1, 4, 36, 576];
    let want_bij = [1u64, 1, 2, 6, 24];
    for n in 0..=4 {
        let (_, f, g) = disjoint(n, n);
        let closed_phi = count_phi(&f, &g).value().clone();
        let enumerated_phi = enumerate_phi(&f, &g, DEFAULT_ENUM_CAP)
            .map_err(|e| e.to_string())?
            .count() as u64;
        let closed_bij = factorial(n);
        let enumerated_bij =
            count_bijections(&f, &g, DEFAULT_ENUM_CAP).map_err(|e| e.to_string())?;
        ensure(closed_phi == want_phi[n].into(), || {
            format!("n={n}: closed phi {closed_phi}")
        })?;
        ensure(enumerated_phi == want_phi[n], || {
            format!("n={n}: enumerated phi {enumerated_phi}")
        })?;
        ensure(closed_bij == want_bij[n].into(), || {
            format!("n={n}: closed bijections {closed_bij}")
        })?;
        ensure(enumerated_bij == want_bij[n], || {
            format!("n={n}: enumerated bijections {enumerated_bij}")
        })?;
    }
    Ok("phi 1,1,4,36,576; bijections 1,1,2,6,24".into())
}

fn non_reciprocity() -> Check {
    for n in 0..=4 {
        let (_, f, g) = disjoint(n, n);
        let found = find_nonreciprocal_phi(&f, &g);
        if n < 2 {
            ensure(found.is_none(), || {
                format!("n={n}: expected none, got {found:?}")
            })?;
            continue;
        }
        let phi = found.ok_or_else(|| format!("n={n}: nothing found"))?;
        ensure(is_valid_projection(&phi, &f, &g), || {
            format!("n={n}: invalid {phi:?}")
        })?;
        ensure(*phi.backward() != phi.forward().reverse(), || {
            format!("n={n}: backward is the reverse of forward")
        })?;
    }
    Ok("found for n=2,3,4; absent for n=0,1".into())
}

fn humes_principle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4855_4d45);
    let u = Arc::new(Universe::with_objects(None, (0..10).map(|i| format!("o{i}"))).unwrap());
    let mut reg = NumberRegistry::new(u.clone());
    let (mut same, mut different) = (0, 0);
    for i in 0..1000 {
        let size_f = rng.gen_range(0..=6);
        // bias toward equal sizes so both sides of the biconditional are exercised
        let size_g = if rng.gen_bool(0.5) {
            size_f
        } else {
            rng.gen_range(0..=6)
        };
        let f = random_concept(&u, &format!("F{i}"), size_f, &mut rng);
        let g = random_concept(&u, &format!("G{i}"), size_g, &mut rng);
        let nf = reg.number_of(&f).map_err(|e| e.to_string())?;
        let ng = reg.number_of(&g).map_err(|e| e.to_string())?;
        let phi = exists_phi(&f, &g).holds;
        let bij = bijection_exists(&f, &g);
        ensure((nf == ng) == phi && phi == bij, || {
            format!("pair {i}: numbers {nf} {ng}, exists_phi {phi}, bijection {bij}")
        })?;
        if phi {
            same += 1;
        } else {
            different += 1;
        }
    }
    Ok(format!(
        "1000 pairs ({same} same number, {different} different), 0 mismatches"
    ))
}

fn zero_and_one() -> Check {
    let u = Arc::new(Universe::with_objects(None, ["a", "b"]).unwrap());
    let mut reg = NumberRegistry::new(u.clone());
    let empty = Concept::new(&u, "Nothing", []).unwrap();
    let single = Concept::new(&u, "JustB", u.objects_named(["b"]).unwrap()).unwrap();
    let zero = reg.zero();
    let one = reg.one().map_err(|e| e.to_string())?;
    ensure(
        reg.number_of(&empty).map_err(|e| e.to_string())? == zero,
        || "zero".into(),
    )?;
    ensure(
        reg.number_of(&single).map_err(|e| e.to_string())? == one,
        || "one".into(),
    )?;
    for a in u.objects() {
        let s = Concept::new(&u, "S", [a.clone()]).unwrap();
        ensure(is_valid_projection(&self_projection(a), &s, &s), || {
            format!("self-loop over {a} rejected")
        })?;
    }
    ensure(zero != one, || "zero equals one".into())?;
    Ok(format!("zero={zero}, one={one}"))
}

/// Backtracking search for an injective total assignment of `from` into `to`
/// along `edges`.
fn injection_exists(from: &[usize], to: &[usize], edges: &HashSet<(usize, usize)>) -> bool {
    fn go(
        i: usize,
        from: &[usize],
        to: &[usize],
        used: &mut Vec<bool>,
        edges: &HashSet<(usize, usize)>,
    ) -> bool {
        if i == from.len() {
            return true;
        }
        for (j, &t) in to.iter().enumerate() {
            if !used[j] && edges.contains(&(from[i], t)) {
                used[j] = true;
                if go(i + 1, from, to, used, edges) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, from, to, &mut vec![false; to.len()], edges)
}

fn ordinals(c: &Concept) -> Vec<usize> {
    c.members().map(ObjectId::ordinal).collect()
}

/// Compares one restricted decision against the oracle and checks its
/// certificate.
fn check_within(f: &Concept, g: &Concept, allowed: &DirectedRelation) -> Result<(), String> {
    let edges: HashSet<(usize, usize)> = allowed
        .pairs()
        .map(|(s, t)| (s.ordinal(), t.ordinal()))
        .collect();
    let back: HashSet<(usize, usize)> = edges.iter().map(|&(s, t)| (t, s)).collect();
    let (fo, go) = (ordinals(f), ordinals(g));
    let oracle = injection_exists(&fo, &go, &edges) && injection_exists(&go, &fo, &back);
    let d = exists_phi_within(f, g, allowed).map_err(|e| e.to_string())?;
    let case = || {
        format!(
            "F={:?} G={:?} allowed={:?}",
            f.extension(),
            g.extension(),
            allowed
        )
    };
    ensure(d.holds == oracle, || {
        format!("oracle {oracle}, got {}: {}", d.holds, case())
    })?;
    match &d.certificate {
        Certificate::Witness { .. } => {
            let phi = d.certificate.correspondence().unwrap();
            ensure(
                is_valid_projection(&phi, f, g)
                    && phi.forward().is_subset(allowed)
                    && phi.backward().is_subset(&allowed.reverse()),
                || format!("witness does not revalidate: {}", case()),
            )
        }
        Certificate::CardinalityMismatch { size_f, size_g } => ensure(
            *size_f == f.len() && *size_g == g.len() && size_f != size_g,
            || format!("bad mismatch certificate: {}", case()),
        ),
        Certificate::DeficiencySet { side, objects } => {
            let (own, edges) = match side {
                Side::F => (f, allowed.clone()),
                Side::G => (g, allowed.reverse()),
            };
            ensure(
                !objects.is_empty()
                    && objects.iter().all(|o| own.contains(o))
                    && neighbors(objects, &edges).len() < objects.len(),
                || {
                    format!(
                        "deficiency set {objects:?} is no Hall violation: {}",
                        case()
                    )
                },
            )
        }
    }
}

fn restricted_oracle() -> Check {
    let start = Instant::now();
    let mut exhaustive = 0usize;
    for size_f in 0..=4 {
        for size_g in 0..=4 {
            let (u, f, g) = disjoint(size_f, size_g);
            let all: Vec<(ObjectId, ObjectId)> = f
                .members()
                .flat_map(|s| g.members().map(move |t| (s.clone(), t.clone())))
                .collect();
            for mask in 0u32..(1 << all.len()) {
                let chosen = all
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, p)| p.clone());
                let allowed = DirectedRelation::new(&u, chosen).unwrap();
                check_within(&f, &g, &allowed)?;
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x4841_4c4c);
    let mut held = 0;
    for _ in 0..500 {
        let size_f = rng.gen_range(0..=7);
        let size_g = if rng.gen_bool(0.7) {
            size_f
        } else {
            rng.gen_range(0..=7)
        };
        let overlap = rng.gen_bool(0.25);
        let (u, f, g) = if overlap {
            let u =
                Universe::with_objects(None, (0..size_f.max(size_g) + 3).map(|i| format!("o{i}")))
                    .unwrap();
            let f = random_concept(&u, "F", size_f, &mut rng);
            let g = random_concept(&u, "G", size_g, &mut rng);
            (u, f, g)
        } else {
            disjoint(size_f, size_g)
        };
        let density = rng.gen_range(0.1..0.9);
        let pairs: Vec<_> = f
            .members()
            .flat_map(|s| g.members().map(move |t| (s.clone(), t.clone())))
            .filter(|_| rng.gen_bool(density))
            .collect();
        let allowed = DirectedRelation::new(&u, pairs).unwrap();
        check_within(&f, &g, &allowed)?;
        if exists_phi_within(&f, &g, &allowed).unwrap().holds {
            held += 1;
        }
    }
    let took = within_budget(start, Duration::from_secs(60))?;
    Ok(format!(
        "{exhaustive} exhaustive + 500 random ({held} hold), 0 disagreements in {took:.2?}"
    ))
}

fn equivalence_laws() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4551_5549);
    for i in 0..500 {
        let n = rng.gen_range(0..=6);
        let u = Universe::with_objects(None, (0..n + 4).map(|i| format!("o{i}"))).unwrap();
        let f = random_concept(&u, "F", n, &mut rng);
        let g = random_concept(&u, "G", n, &mut rng);
        let h = random_concept(&u, "H", n, &mut rng);
        let phi = random_phi(&u, &f, &g, &mut rng);
        let psi = random_phi(&u, &g, &h, &mut rng);
        ensure(
            is_valid_projection(&phi, &f, &g) && is_valid_projection(&psi, &g, &h),
            || format!("pair {i}: generated correspondence invalid"),
        )?;
        ensure(
            is_valid_projection(&Correspondence::identity(&f), &f, &f),
            || format!("pair {i}: reflexivity"),
        )?;
        ensure(is_valid_projection(&phi.swapped(), &g, &f), || {
            format!("pair {i}: symmetry")
        })?;
        ensure(is_valid_projection(&phi.then(&psi), &f, &h), || {
            format!("pair {i}: transitivity")
        })?;
    }
    Ok("500 pairs, 0 failures".into())
}

const NAME_CHARS: &[char] = &['a', 'b', 'x', 'Z', '0', '7', '_', '\'', 'é', 'λ'];
const KEYWORDS: &[&str] = &["universe", "object", "concept", "relation"];

fn random_name(rng: &mut ChaCha8Rng, taken: &mut BTreeSet<String>) -> String {
    loop {
        let name = if rng.gen_bool(0.05) {
            KEYWORDS.choose(rng).unwrap().to_string()
        } else {
            (0..rng.gen_range(1..=4))
                .map(|_| *NAME_CHARS.choose(rng).unwrap())
                .collect()
        };
        if taken.insert(name.clone()) {
            return name;
        }
    }
}

fn space(rng: &mut ChaCha8Rng) -> &'static str {
    [" ", "  ", "\t", " "].choose(rng).unwrap()
}

/// A random well-formed document with its intended concept extensions.
fn random_document(rng: &mut ChaCha8Rng) -> (String, Vec<(String, BTreeSet<String>)>) {
    let mut objects = BTreeSet::new();
    let names: Vec<String> = (0..rng.gen_range(0..=8))
        .map(|_| random_name(rng, &mut objects))
        .collect();
    let mut lines = Vec::new();
    for chunk in names.chunks(3) {
        let mut line = "object".to_string();
        for n in chunk {
            line += space(rng);
            line += n;
        }
        if rng.gen_bool(0.2) {
            line += "  # objects";
        }
        lines.push(line);
    }
    let mut decls = Vec::new();
    let mut concepts = Vec::new();
    let mut taken = BTreeSet::new();
    if rng.gen_bool(0.7) {
        decls.push(format!(
            "universe {}",
            random_name(rng, &mut BTreeSet::new())
        ));
    }
    for _ in 0..rng.gen_range(0..=3) {
        let name = random_name(rng, &mut taken);
        let k = rng.gen_range(0..=names.len());
        let members: Vec<&String> = names.choose_multiple(rng, k).collect();
        let mut line = format!("concept{}{name}{}={}{{", space(rng), space(rng), space(rng));
        for m in &members {
            line += space(rng);
            line += m;
        }
        line += if rng.gen_bool(0.5) { " }" } else { "}" };
        decls.push(line);
        concepts.push((name, members.into_iter().cloned().collect()));
    }
    let mut rtaken = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=2) {
        let name = random_name(rng, &mut rtaken);
        let mut pairs = BTreeSet::new();
        if !names.is_empty() {
            for _ in 0..rng.gen_range(0..=5) {
                pairs.insert((names.choose(rng).unwrap(), names.choose(rng).unwrap()));
            }
        }
        let mut line = format!("relation {name} = {{");
        for (s, t) in pairs {
            let _ = write!(line, "{}({s}{},{}{t})", space(rng), space(rng), space(rng));
        }
        line += " }";
        decls.push(line);
    }
    decls.shuffle(rng);
    lines.extend(decls);
    let at = rng.gen_range(0..=lines.len());
    lines.insert(at, "# comment line".into());
    if rng.gen_bool(0.3) {
        lines.insert(0, String::new());
    }
    (lines.join("\n"), concepts)
}

fn run(args: &[&str], stdin: &str) -> (i32, serde_json::Value) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut args_full = vec!["equinum"];
    args_full.extend_from_slice(args);
    let code = equinum_cli::run_cli(args_full, &mut stdin.as_bytes(), &mut out, &mut err);
    let doc = serde_json::from_slice(&out).unwrap_or(serde_json::Value::Null);
    (code, doc)
}

fn dsl_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4453_4c00);
    for i in 0..200 {
        let (text, concepts) = random_document(&mut rng);
        let first = parse_universe(&text)
            .map_err(|e| format!("doc {i}: {e}\n{text}"))?
            .universe;
        for (name, members) in &concepts {
            let got: BTreeSet<String> = first
                .concept(name)
                .ok_or_else(|| format!("doc {i}: concept {name} missing"))?
                .members()
                .map(|o| o.symbol().to_owned())
                .collect();
            ensure(&got == members, || {
                format!("doc {i}: concept {name} parsed as {got:?}")
            })?;
        }
        let canonical = write_universe(&first);
        let second = parse_universe(&canonical)
            .map_err(|e| format!("doc {i}: reparse {e}\n{canonical}"))?
            .universe;
        ensure(first == second, || {
            format!("doc {i}: round trip changed the universe\n{text}")
        })?;
        ensure(write_universe(&second) == canonical, || {
            format!("doc {i}: canonical form unstable")
        })?;
    }

    let bad = [
        ("obj a", 1, 1),
        ("object a\nconcept F = { a", 2, 16),
        ("object a\nconcept F { a }", 2, 11),
        ("object a\nrelation R = { (a a) }", 2, 19),
        ("object a ; b", 1, 10),
        ("concept F = { z }", 1, 15),
        ("object a\nobject a", 2, 8),
        ("object a\nconcept F = { a }\nconcept F = { }", 3, 9),
        ("object a\nrelation R = { (a,a) (a,a) }", 2, 22),
        ("universe U\nuniverse V", 2, 10),
        ("concept F = { a }\nobject a", 1, 15),
    ];
    for (text, line, column) in bad {
        for args in [&["fmt", "-"][..], &["equinum", "F", "F", "-"][..]] {
            let (code, doc) = run(args, text);
            ensure(code == 2, || format!("{text:?} via {args:?}: exit {code}"))?;
            let diags = doc["diagnostics"].as_array().cloned().unwrap_or_default();
            let first = diags
                .first()
                .ok_or_else(|| format!("{text:?}: no diagnostics"))?;
            ensure(first["line"] == line && first["column"] == column, || {
                format!(
                    "{text:?}: diagnostic at {}:{}, want {line}:{column}",
                    first["line"], first["column"]
                )
            })?;
        }
    }
    Ok(format!(
        "200 documents round-trip; {} error cases located with exit 2",
        bad.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "definitional agreement up to size 5",
            definitional_agreement,
        ),
        (
            "multiplicity of correspondences and bijections",
            multiplicity,
        ),
        ("non-reciprocal correspondences", non_reciprocity),
        (
            "Hume's principle on random registered pairs",
            humes_principle,
        ),
        ("zero and one", zero_and_one),
        (
            "restricted mode against subset-search oracle",
            restricted_oracle,
        ),
        ("equivalence-relation laws", equivalence_laws),
        ("DSL round trip and located diagnostics", dsl_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result =
            panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
