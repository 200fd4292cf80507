//! Command-line driver: reads universe files, runs one check, and writes a
//! single JSON result document to stdout.
//!
//! Exit codes: 0 when the claim holds (or a value was computed), 1 when it is
//! refuted, 2 on usage, parse or semantic errors.

use std::collections::BTreeMap;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use equinum_core::definitional::{
    equivalence_report, find_nonreciprocal_phi, CanonicalPairs, SeededPairs,
};
use equinum_core::dsl::{parse_universe, write_universe, Diagnostic, DiagnosticKind};
use equinum_core::equinum::{count_phi, enumerate_phi, exists_phi, exists_phi_within};
use equinum_core::laws::{
    exclusive_violations, functional_violations, is_exclusive, is_functional, is_injective_mapping,
    is_valid_projection,
};
use equinum_core::{
    Certificate, Concept, DirectedRelation, NumberRegistry, Universe, DEFAULT_ENUM_CAP,
};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "equinum", version)]
#[command(about = "Check sameness of number between finite concepts")]
struct Cli {
    /// Largest concept size that may be enumerated
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: usize,

    /// Print a human-readable rendering instead of JSON
    #[arg(long, global = true)]
    human: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the uniqueness laws on a relation, optionally as a mapping FROM -> TO
    CheckLaws {
        #[arg(long)]
        relation: String,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
        file: PathBuf,
    },
    /// Decide whether F and G have the same number
    Equinum {
        f: String,
        g: String,
        /// Restrict both directions to the pairs of this relation
        #[arg(long)]
        within: Option<String>,
        file: PathBuf,
    },
    /// List every valid correspondence between F and G
    EnumeratePhi { f: String, g: String, file: PathBuf },
    /// Count the valid correspondences between F and G
    CountPhi { f: String, g: String, file: PathBuf },
    /// The number belonging to F among the file's concepts
    Number { f: String, file: PathBuf },
    /// Find a valid correspondence that is not a bijection read both ways
    Nonreciprocal { f: String, g: String, file: PathBuf },
    /// Cross-check the definitions of equinumerosity for all sizes up to K
    EquivSuite {
        #[arg(long = "max-n")]
        max_n: usize,
        /// Draw randomized concepts from this seed instead of canonical ones
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the canonical form of a universe file
    Fmt { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Refuted,
    Computed,
    Error,
}

/// A diagnostic in the result document. Parse diagnostics carry a location.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutputDiagnostic {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub token: Option<String>,
}

impl From<&Diagnostic> for OutputDiagnostic {
    fn from(d: &Diagnostic) -> Self {
        Self {
            kind: match d.kind {
                DiagnosticKind::Syntax => "syntax",
                DiagnosticKind::Semantic => "semantic",
            }
            .to_owned(),
            message: d.message.clone(),
            line: Some(d.line),
            column: Some(d.column),
            token: Some(d.token.clone()),
        }
    }
}

impl OutputDiagnostic {
    fn plain(kind: &str, message: impl Into<String>) -> Self {
        Self {
            kind: kind.to_owned(),
            message: message.into(),
            line: None,
            column: None,
            token: None,
        }
    }
}

/// The one JSON document written per invocation.
#[derive(Clone, Debug, Serialize)]
pub struct ResultDocument {
    pub command: String,
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    /// Exact counts as decimal strings.
    pub counts: BTreeMap<String, String>,
    pub diagnostics: Vec<OutputDiagnostic>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl ResultDocument {
    fn new(command: &str, verdict: Verdict) -> Self {
        Self {
            command: command.to_owned(),
            verdict,
            certificate: None,
            counts: BTreeMap::new(),
            diagnostics: Vec::new(),
            data: Value::Null,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Holds | Verdict::Computed => EXIT_HOLDS,
            Verdict::Refuted => EXIT_REFUTED,
            Verdict::Error => EXIT_ERROR,
        }
    }
}

struct Failure(Vec<OutputDiagnostic>);

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure(vec![OutputDiagnostic::plain("usage", message)])
    }

    fn semantic(message: impl Into<String>) -> Self {
        Failure(vec![OutputDiagnostic::plain("semantic", message)])
    }
}

type Outcome = Result<ResultDocument, Failure>;

/// Runs one invocation. `args` includes the program name.
pub fn run_cli<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_HOLDS;
            }
            let _ = write!(stderr, "{e}");
            let mut doc = ResultDocument::new("", Verdict::Error);
            doc.diagnostics
                .push(OutputDiagnostic::plain("usage", e.kind().to_string()));
            emit(&doc, false, stdout);
            return EXIT_ERROR;
        }
    };
    let name = command_name(&cli.command);
    let doc = match dispatch(&cli, stdin) {
        Ok(doc) => doc,
        Err(Failure(diags)) => {
            for d in &diags {
                let _ = match (d.line, d.column) {
                    (Some(l), Some(c)) => {
                        writeln!(stderr, "{l}:{c}: {} error: {}", d.kind, d.message)
                    }
                    _ => writeln!(stderr, "{} error: {}", d.kind, d.message),
                };
            }
            let mut doc = ResultDocument::new(name, Verdict::Error);
            doc.diagnostics = diags;
            doc
        }
    };
    emit(&doc, cli.human, stdout);
    doc.exit_code()
}

fn emit(doc: &ResultDocument, human: bool, out: &mut dyn Write) {
    let _ = if human {
        out.write_all(render_human(doc).as_bytes())
    } else {
        serde_json::to_writer_pretty(&mut *out, doc)
            .map_err(io::Error::from)
            .and_then(|_| writeln!(out))
    };
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckLaws { .. } => "check-laws",
        Command::Equinum { .. } => "equinum",
        Command::EnumeratePhi { .. } => "enumerate-phi",
        Command::CountPhi { .. } => "count-phi",
        Command::Number { .. } => "number",
        Command::Nonreciprocal { .. } => "nonreciprocal",
        Command::EquivSuite { .. } => "equiv-suite",
        Command::Fmt { .. } => "fmt",
    }
}

fn load(path: &Path, stdin: &mut dyn Read) -> Result<Universe, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(format!("cannot read standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?
    };
    parse_universe(&text)
        .map(|doc| doc.universe)
        .map_err(|errs| Failure(errs.0.iter().map(OutputDiagnostic::from).collect()))
}

fn concept<'u>(u: &'u Universe, name: &str) -> Result<&'u Concept, Failure> {
    u.concept(name)
        .ok_or_else(|| Failure::semantic(format!("no concept named `{name}`")))
}

fn relation<'u>(u: &'u Universe, name: &str) -> Result<&'u DirectedRelation, Failure> {
    u.relation(name)
        .ok_or_else(|| Failure::semantic(format!("no relation named `{name}`")))
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    let cap = cli.enum_cap;
    let name = command_name(&cli.command);
    match &cli.command {
        Command::CheckLaws {
            relation: r,
            from,
            to,
            file,
        } => {
            let u = load(file, stdin)?;
            let rel = relation(&u, r)?;
            let functional = is_functional(rel);
            let exclusive = is_exclusive(rel);
            let mut holds = functional && exclusive;
            let mut data = json!({
                "relation": r,
                "functional": functional,
                "exclusive": exclusive,
                "functional_violations": functional_violations(rel),
                "exclusive_violations": exclusive_violations(rel),
            });
            if let (Some(from), Some(to)) = (from, to) {
                let mapping = is_injective_mapping(rel, concept(&u, from)?, concept(&u, to)?);
                holds &= mapping;
                data["injective_mapping"] = json!(mapping);
            }
            let mut doc = ResultDocument::new(name, verdict(holds));
            doc.data = data;
            Ok(doc)
        }
        Command::Equinum { f, g, within, file } => {
            let u = load(file, stdin)?;
            let (fc, gc) = (concept(&u, f)?, concept(&u, g)?);
            let decision = match within {
                None => exists_phi(fc, gc),
                Some(r) => exists_phi_within(fc, gc, relation(&u, r)?)
                    .map_err(|e| Failure::semantic(e.to_string()))?,
            };
            if let Some(phi) = decision.certificate.correspondence() {
                if !is_valid_projection(&phi, fc, gc) {
                    return Err(Failure(vec![OutputDiagnostic::plain(
                        "internal",
                        "emitted witness failed revalidation",
                    )]));
                }
            }
            let mut doc = ResultDocument::new(name, verdict(decision.holds));
            doc.certificate = Some(decision.certificate);
            Ok(doc)
        }
        Command::EnumeratePhi { f, g, file } => {
            let u = load(file, stdin)?;
            let (fc, gc) = (concept(&u, f)?, concept(&u, g)?);
            let all: Vec<_> = enumerate_phi(fc, gc, cap)
                .map_err(|e| Failure::usage(e.to_string()))?
                .collect();
            let mut doc = ResultDocument::new(name, Verdict::Computed);
            doc.counts.insert("phi".into(), all.len().to_string());
            doc.data = json!({ "correspondences": all });
            Ok(doc)
        }
        Command::CountPhi { f, g, file } => {
            let u = load(file, stdin)?;
            let (fc, gc) = (concept(&u, f)?, concept(&u, g)?);
            let mut doc = ResultDocument::new(name, Verdict::Computed);
            doc.counts
                .insert("phi".into(), count_phi(fc, gc).to_string());
            Ok(doc)
        }
        Command::Number { f, file } => {
            let u = Arc::new(load(file, stdin)?);
            let target = concept(&u, f)?.clone();
            let mut reg = NumberRegistry::new(u.clone());
            for c in u.concepts() {
                reg.number_of(c)
                    .map_err(|e| Failure::semantic(e.to_string()))?;
            }
            let handle = reg
                .number_of(&target)
                .map_err(|e| Failure::semantic(e.to_string()))?;
            let mut doc = ResultDocument::new(name, Verdict::Computed);
            doc.counts
                .insert("class_id".into(), handle.class_id().to_string());
            doc.data = json!({
                "concept": f,
                "number": handle,
                "is_number": reg.is_number(handle),
                "class_members": reg.members(handle).collect::<Vec<_>>(),
            });
            Ok(doc)
        }
        Command::Nonreciprocal { f, g, file } => {
            let u = load(file, stdin)?;
            let (fc, gc) = (concept(&u, f)?, concept(&u, g)?);
            Ok(match find_nonreciprocal_phi(fc, gc) {
                Some(phi) => {
                    let mut doc = ResultDocument::new(name, Verdict::Holds);
                    doc.data = json!({ "reciprocal": phi.is_reciprocal() });
                    doc.certificate = Some(Certificate::witness(phi));
                    doc
                }
                None => {
                    let mut doc = ResultDocument::new(name, Verdict::Refuted);
                    if fc.len() != gc.len() {
                        doc.certificate = Some(Certificate::CardinalityMismatch {
                            size_f: fc.len(),
                            size_g: gc.len(),
                        });
                    } else {
                        doc.data = json!({
                            "reason": "every correspondence between concepts of size at most 1 is reciprocal",
                        });
                    }
                    doc
                }
            })
        }
        Command::EquivSuite { max_n, seed } => {
            let report = match seed {
                Some(s) => equivalence_report(&mut SeededPairs::new(*s), *max_n, cap),
                None => equivalence_report(&mut CanonicalPairs, *max_n, cap),
            }
            .map_err(|e| Failure::usage(e.to_string()))?;
            let mut doc = ResultDocument::new(name, verdict(report.is_consistent()));
            for (n, (p, b)) in report
                .phi_counts
                .iter()
                .zip(&report.bijection_counts)
                .enumerate()
            {
                doc.counts.insert(format!("phi_{n}"), p.to_string());
                doc.counts.insert(format!("bijections_{n}"), b.to_string());
            }
            doc.data = serde_json::to_value(&report).expect("report serializes");
            Ok(doc)
        }
        Command::Fmt { file } => {
            let u = load(file, stdin)?;
            let mut doc = ResultDocument::new(name, Verdict::Computed);
            doc.data = json!({ "text": write_universe(&u) });
            Ok(doc)
        }
    }
}

fn verdict(holds: bool) -> Verdict {
    if holds {
        Verdict::Holds
    } else {
        Verdict::Refuted
    }
}

fn render_relation(r: &Value) -> String {
    let pairs: Vec<String> = r
        .as_array()
        .into_iter()
        .flatten()
        .map(|p| {
            format!(
                "({},{})",
                p[0].as_str().unwrap_or("?"),
                p[1].as_str().unwrap_or("?")
            )
        })
        .collect();
    format!("{{ {} }}", pairs.join(" "))
}

fn render_human(doc: &ResultDocument) -> String {
    if doc.command == "fmt" && doc.verdict == Verdict::Computed {
        return doc.data["text"].as_str().unwrap_or_default().to_owned();
    }
    let mut out = format!("{}: {:?}\n", doc.command, doc.verdict).to_lowercase();
    if let Some(cert) = &doc.certificate {
        let v = serde_json::to_value(cert).expect("certificate serializes");
        match cert {
            Certificate::Witness { .. } => {
                out += &format!("  forward:  {}\n", render_relation(&v["forward"]));
                out += &format!("  backward: {}\n", render_relation(&v["backward"]));
            }
            Certificate::CardinalityMismatch { size_f, size_g } => {
                out += &format!("  sizes differ: {size_f} vs {size_g}\n");
            }
            Certificate::DeficiencySet { side, objects } => {
                let names: Vec<_> = objects.iter().map(|o| o.symbol()).collect();
                out += &format!(
                    "  {side:?}-side objects with too few partners: {{ {} }}\n",
                    names.join(" ")
                );
            }
        }
    }
    if doc.command == "check-laws" {
        for law in ["functional", "exclusive", "injective_mapping"] {
            if let Some(b) = doc.data[law].as_bool() {
                out += &format!("  {law}: {b}\n");
            }
        }
        for key in ["functional_violations", "exclusive_violations"] {
            for v in doc.data[key].as_array().into_iter().flatten() {
                out += &format!(
                    "  {key}: {} with {} and {}\n",
                    v["shared"].as_str().unwrap_or("?"),
                    v["first"].as_str().unwrap_or("?"),
                    v["second"].as_str().unwrap_or("?")
                );
            }
        }
    }
    for (k, v) in &doc.counts {
        out += &format!("  {k} = {v}\n");
    }
    for d in &doc.diagnostics {
        match (d.line, d.column) {
            (Some(l), Some(c)) => out += &format!("  {l}:{c}: {} error: {}\n", d.kind, d.message),
            _ => out += &format!("  {} error: {}\n", d.kind, d.message),
        }
    }
    out
}
