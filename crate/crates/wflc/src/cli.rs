//! Command implementations and the stable file formats they exchange.
//! Every format carries a version header line; identical inputs and
//! configuration produce byte-identical output files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::codegen::{gen_skeleton, Lang};
use crate::config::ProjectConfig;
use crate::deduction::{
    bounded_sat_with, check_entailment_with, export_tptp, Outcome, RequirementSet, SampleOptions,
    SearchOptions, Verdict,
};
use crate::expr_text::{derive, parse_expr, print_expr};
use crate::fol::FolMode;
use crate::llm::{call_llm, LlmMode};
use crate::pltl::decoration_axioms;
use crate::scenario::{
    build_prompt, extract_vocabulary, map_structure, parse_tags, DraftNode, DraftStructure,
    EditFile, PromptStage,
};
use crate::specgen::{pi_c, SpecSet};
use crate::workflow::{
    pi_scan, Activity, Atom, DiagramDoc, DiagramExpr, PatternExpr, PatternKind,
};

pub const EXPR_HEADER: &str = "# wflc:expr:v1";
pub const DIAGRAM_FORMAT: &str = "wflc-diagram/1";
pub const VOCAB_FORMAT: &str = "wflc-vocab/1";
pub const DRAFT_FORMAT: &str = "wflc-draft/1";
pub const VERDICT_FORMAT: &str = "wflc-verdict/1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error("{path}: {source}")]
    Expr { path: String, source: crate::expr_text::SyntaxError },
    #[error(transparent)]
    Workflow(#[from] crate::workflow::WorkflowError),
    #[error(transparent)]
    SpecGen(#[from] crate::specgen::SpecGenError),
    #[error(transparent)]
    Deduction(#[from] crate::deduction::DeductionError),
    #[error(transparent)]
    Derive(#[from] crate::expr_text::DeriveError),
    #[error(transparent)]
    Scenario(#[from] crate::scenario::ScenarioError),
    #[error(transparent)]
    Llm(#[from] crate::llm::LlmError),
    #[error("{path}: {source}")]
    Tags { path: String, source: crate::scenario::TagError },
    #[error(transparent)]
    Requirements(#[from] crate::deduction::RequirementError),
    #[error(transparent)]
    SpecText(#[from] crate::specgen::SpecTextError),
    #[error("{path}: {message}")]
    Completion { path: String, message: String },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

// --- expression files --------------------------------------------------------

/// Expression file: the version header (optionally carrying `id=`), comment
/// lines, and the expression text.
pub fn write_expr_file(path: &Path, expr: &PatternExpr, id: Option<&str>) -> Result<(), CliError> {
    let header = match id {
        Some(id) => format!("{EXPR_HEADER} id={id}"),
        None => EXPR_HEADER.to_string(),
    };
    write(path, &format!("{header}\n{}\n", print_expr(expr)))
}

pub fn read_expr_file(path: &Path) -> Result<(PatternExpr, Option<String>), CliError> {
    let text = read(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if !header.starts_with(EXPR_HEADER) {
        return Err(CliError::Format {
            path: path.display().to_string(),
            message: format!("missing {EXPR_HEADER:?} header"),
        });
    }
    let id = header.split_whitespace().find_map(|f| f.strip_prefix("id=")).map(str::to_string);
    let body: String =
        lines.filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join(" ");
    let expr = parse_expr(body.trim())
        .map_err(|e| CliError::Expr { path: path.display().to_string(), source: e })?;
    Ok((expr, id))
}

// --- diagram files ------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DiagramExprJson {
    Call {
        call: String,
    },
    Activity {
        activity: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        params: Vec<String>,
    },
    Pattern {
        pattern: String,
        args: Vec<DiagramExprJson>,
    },
}

#[derive(Serialize, Deserialize)]
struct DiagramDocJson {
    format: String,
    id: String,
    body: DiagramExprJson,
    #[serde(default)]
    diagrams: BTreeMap<String, DiagramExprJson>,
}

fn expr_from_json(j: &DiagramExprJson, path: &str) -> Result<DiagramExpr, CliError> {
    match j {
        DiagramExprJson::Call { call } => Ok(DiagramExpr::Call(call.clone())),
        DiagramExprJson::Activity { activity, params } => {
            let (name, primes) = match activity.find('\'') {
                Some(i) => (&activity[..i], (activity.len() - i) as u32),
                None => (activity.as_str(), 0),
            };
            let atom = Atom::with(name, primes, crate::workflow::Decoration::None)
                .map_err(|e| CliError::Format { path: path.to_string(), message: e.to_string() })?;
            Ok(DiagramExpr::Activity(Activity { atom, params: params.clone() }))
        }
        DiagramExprJson::Pattern { pattern, args } => {
            let kind = PatternKind::from_keyword(pattern).ok_or_else(|| CliError::Format {
                path: path.to_string(),
                message: format!("unknown pattern {pattern:?}"),
            })?;
            let args = args
                .iter()
                .map(|a| expr_from_json(a, path))
                .collect::<Result<Vec<_>, _>>()?;
            let node = DiagramExpr::Node(kind, args);
            node.validate().map_err(|e| CliError::Format {
                path: path.to_string(),
                message: e.to_string(),
            })?;
            Ok(node)
        }
    }
}

/// Parse diagram-document JSON; `origin` names the source in errors.
pub fn parse_diagram_str(text: &str, origin: &str) -> Result<DiagramDoc, CliError> {
    let parsed: DiagramDocJson = serde_json::from_str(text).map_err(|e| CliError::Format {
        path: origin.to_string(),
        message: e.to_string(),
    })?;
    if parsed.format != DIAGRAM_FORMAT {
        return Err(CliError::Format {
            path: origin.to_string(),
            message: format!("expected format {DIAGRAM_FORMAT:?}, found {:?}", parsed.format),
        });
    }
    let body = expr_from_json(&parsed.body, origin)?;
    let mut context = BTreeMap::new();
    for (id, body_json) in &parsed.diagrams {
        context.insert(id.clone(), expr_from_json(body_json, origin)?);
    }
    Ok(DiagramDoc { id: parsed.id, body, context })
}

pub fn read_diagram_file(path: &Path) -> Result<DiagramDoc, CliError> {
    let text = read(path)?;
    parse_diagram_str(&text, &path.display().to_string())
}

// --- commands -----------------------------------------------------------------

/// `tag`: build the stage prompt for a scenario, send it (or replay a
/// canned response offline), and write the tagged result.
pub fn cmd_tag(
    scenario_path: &Path,
    stage: PromptStage,
    out: &Path,
    mode: &LlmMode,
    session_log: Option<&Path>,
) -> Result<(), CliError> {
    let scenario = read(scenario_path)?;
    let prompt = build_prompt(stage, &scenario)?;
    let response = call_llm(&prompt, mode, session_log)?;
    write(out, &response)
}

fn draft_to_json(node: &DraftNode) -> serde_json::Value {
    match node {
        DraftNode::Activity { name, phrase } => json!({ "activity": name, "phrase": phrase }),
        DraftNode::Structure { kind, pattern, slots, extras } => json!({
            "tag": kind.as_str(),
            "pattern": pattern.keyword(),
            "slots": slots
                .iter()
                .map(|s| s.as_ref().map(draft_to_json).unwrap_or(serde_json::Value::Null))
                .collect::<Vec<_>>(),
            "extras": extras.iter().map(draft_to_json).collect::<Vec<_>>(),
        }),
    }
}

/// `extract`: parse a tagged scenario, write the vocabulary and the draft
/// structure with diagnostics; with an edits file that fills every hole,
/// also write the completed expression.
pub fn cmd_extract(
    tagged_path: &Path,
    vocab_out: &Path,
    draft_out: &Path,
    edits: Option<&Path>,
    expr_out: Option<&Path>,
) -> Result<DraftStructure, CliError> {
    let text = read(tagged_path)?;
    let scenario = parse_tags(&text)
        .map_err(|e| CliError::Tags { path: tagged_path.display().to_string(), source: e })?;

    let mut vocabulary = extract_vocabulary(&scenario);
    let source_name = tagged_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string());
    vocabulary.index.insert(
        source_name,
        vocabulary.entries.iter().map(|e| e.name.clone()).collect(),
    );
    let vocab_json = json!({
        "format": VOCAB_FORMAT,
        "activities": vocabulary.entries,
        "index": vocabulary.index,
        "orphan_params": vocabulary.orphan_params,
    });
    write(vocab_out, &format!("{:#}\n", vocab_json))?;

    let draft = map_structure(&scenario);
    let draft_json = json!({
        "format": DRAFT_FORMAT,
        "roots": draft.roots.iter().map(draft_to_json).collect::<Vec<_>>(),
        "diagnostics": draft
            .diagnostics
            .iter()
            .map(|d| json!({ "path": d.path, "message": d.message }))
            .collect::<Vec<_>>(),
    });
    write(draft_out, &format!("{:#}\n", draft_json))?;

    if let Some(edits_path) = edits {
        let edit_file = EditFile::parse(&read(edits_path)?).map_err(|message| {
            CliError::Completion { path: edits_path.display().to_string(), message }
        })?;
        let expr = draft.complete(&edit_file).map_err(|e| CliError::Completion {
            path: edits_path.display().to_string(),
            message: e.to_string(),
        })?;
        if let Some(out) = expr_out {
            write_expr_file(out, &expr, None)?;
        }
    }
    Ok(draft)
}

/// `expr`: flatten a diagram document into its pattern expression.
pub fn cmd_expr(diagram_path: &Path, out: &Path) -> Result<PatternExpr, CliError> {
    let doc = read_diagram_file(diagram_path)?;
    let expr = pi_scan(&doc)?;
    write_expr_file(out, &expr, Some(&doc.id))?;
    Ok(expr)
}

/// `genspec`: generate the logical specification for an expression file.
pub fn cmd_genspec(
    expr_path: &Path,
    out: &Path,
    with_decoration_axioms: bool,
) -> Result<SpecSet, CliError> {
    let (expr, _) = read_expr_file(expr_path)?;
    let mut spec = pi_c(&expr)?;
    if with_decoration_axioms {
        for axiom in decoration_axioms(&spec.alphabet()) {
            spec.push_unique(axiom);
        }
    }
    write(out, &spec.to_text())?;
    Ok(spec)
}

/// Exit status contract of `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyStatus {
    /// All requirements satisfied up to the bound.
    AllSatisfied,
    /// At least one requirement has a counterexample.
    CounterexampleFound,
    /// The specification itself is unsatisfiable up to the bound.
    InconsistentSpec,
}

impl VerifyStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            VerifyStatus::AllSatisfied => 0,
            VerifyStatus::CounterexampleFound => 1,
            VerifyStatus::InconsistentSpec => 2,
        }
    }
}

pub struct VerifyReport {
    pub status: VerifyStatus,
    pub sat: Verdict,
    pub verdicts: Vec<(String, Verdict)>,
    pub human: String,
    pub machine: serde_json::Value,
}

fn trace_json(trace: &crate::pltl::Trace) -> serde_json::Value {
    let states: Vec<Vec<String>> = (0..trace.len())
        .map(|i| trace.state_atoms(i).iter().map(|a| a.to_string()).collect())
        .collect();
    json!(states)
}

fn outcome_json(outcome: &Outcome) -> serde_json::Value {
    match outcome {
        Outcome::SatWitness(t) => json!({ "kind": "sat_witness", "trace": trace_json(t) }),
        Outcome::UnsatUpToBound(k) => json!({ "kind": "unsat_up_to_bound", "bound": k }),
        Outcome::SatisfiedUpToBound(k) => json!({ "kind": "satisfied_up_to_bound", "bound": k }),
        Outcome::CounterexampleFound(t) => {
            json!({ "kind": "counterexample", "trace": trace_json(t) })
        }
    }
}

/// `verify`: check spec consistency and each requirement at the bound.
/// Sampled (incomplete) searches are labeled as such and an inconsistency
/// verdict is only issued from an exhaustive search.
pub fn cmd_verify(
    spec_path: &Path,
    req_path: &Path,
    config: &ProjectConfig,
) -> Result<VerifyReport, CliError> {
    let spec = SpecSet::from_text(&read(spec_path)?)?;
    let reqs = RequirementSet::from_text(&read(req_path)?)?;
    let checker = &config.checker;
    let opts = SearchOptions {
        state_budget: checker.state_budget,
        sample_fallback: Some(SampleOptions { samples: checker.samples, seed: checker.seed }),
    };
    let sat = bounded_sat_with(&spec, checker.bound, &opts)?;
    let verdicts = check_entailment_with(&spec, &reqs, checker.bound, &opts)?;
    let named: Vec<(String, Verdict)> = reqs
        .requirements()
        .iter()
        .map(|r| r.name.clone())
        .zip(verdicts)
        .collect();

    let spec_inconsistent =
        matches!(sat.outcome, Outcome::UnsatUpToBound(_)) && sat.mode.is_exhaustive();
    let any_counterexample =
        named.iter().any(|(_, v)| matches!(v.outcome, Outcome::CounterexampleFound(_)));
    let status = if spec_inconsistent {
        VerifyStatus::InconsistentSpec
    } else if any_counterexample {
        VerifyStatus::CounterexampleFound
    } else {
        VerifyStatus::AllSatisfied
    };

    let mut human = String::new();
    let sat_line = match &sat.outcome {
        Outcome::SatWitness(t) => format!("consistent: witness {t}"),
        Outcome::UnsatUpToBound(k) => {
            if sat.mode.is_exhaustive() {
                format!("INCONSISTENT up to bound {k}")
            } else {
                format!("no witness found up to bound {k} (satisfiability unknown)")
            }
        }
        _ => unreachable!("bounded_sat returns sat outcomes"),
    };
    writeln!(human, "spec {spec_path}: {sat_line} [{mode}]", spec_path = spec_path.display(), mode = sat.mode.label()).unwrap();
    for (name, v) in &named {
        let line = match &v.outcome {
            Outcome::SatisfiedUpToBound(k) => format!("satisfied up to bound {k}"),
            Outcome::CounterexampleFound(t) => format!("COUNTEREXAMPLE {t}"),
            _ => unreachable!("entailment returns requirement outcomes"),
        };
        writeln!(human, "{name}: {line} [{mode}]", mode = v.mode.label()).unwrap();
    }
    writeln!(human, "result: {}", match status {
        VerifyStatus::AllSatisfied => "no counterexample found",
        VerifyStatus::CounterexampleFound => "counterexample found",
        VerifyStatus::InconsistentSpec => "specification inconsistent",
    })
    .unwrap();

    let machine = json!({
        "format": VERDICT_FORMAT,
        "bound": checker.bound,
        "spec": {
            "query": sat.query,
            "mode": sat.mode.label(),
            "exhaustive": sat.mode.is_exhaustive(),
            "outcome": outcome_json(&sat.outcome),
        },
        "requirements": named.iter().map(|(name, v)| json!({
            "name": name,
            "query": v.query,
            "mode": v.mode.label(),
            "exhaustive": v.mode.is_exhaustive(),
            "outcome": outcome_json(&v.outcome),
        })).collect::<Vec<_>>(),
        "status": status.exit_code(),
    });

    Ok(VerifyReport { status, sat, verdicts: named, human, machine })
}

/// `tptp`: write one problem file per requirement next to `out_dir`.
pub fn cmd_tptp(
    spec_path: &Path,
    req_path: &Path,
    out_dir: &Path,
    mode: FolMode,
) -> Result<Vec<PathBuf>, CliError> {
    let spec = SpecSet::from_text(&read(spec_path)?)?;
    let reqs = RequirementSet::from_text(&read(req_path)?)?;
    let stem = spec_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "spec".into());
    let mut written = Vec::new();
    for problem in export_tptp(&spec, &reqs, mode) {
        let name = match &problem.requirement {
            Some(req) => format!("{stem}_{req}.p"),
            None => format!("{stem}.p"),
        };
        let path = out_dir.join(name);
        write(&path, &problem.text)?;
        written.push(path);
    }
    Ok(written)
}

/// `gencode`: emit a skeleton file named `<diagram-id>.<lang>`.
pub fn cmd_gencode(expr_path: &Path, lang: Lang, out_dir: &Path) -> Result<PathBuf, CliError> {
    let (expr, id) = read_expr_file(expr_path)?;
    let unit = id
        .or_else(|| expr_path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "Workflow".into());
    let unit = sanitize_unit(&unit);
    let skeleton = gen_skeleton(&expr, lang, &unit);
    let path = out_dir.join(format!("{unit}.{}", lang.extension()));
    write(&path, &skeleton.source)?;
    Ok(path)
}

fn sanitize_unit(raw: &str) -> String {
    let mut s: String =
        raw.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit()) {
        s.insert(0, 'W');
    }
    s
}

/// `derive`: the production-rule sequence of an expression file.
pub fn cmd_derive(expr_path: &Path) -> Result<String, CliError> {
    let (expr, _) = read_expr_file(expr_path)?;
    let trace = derive(&expr)?;
    Ok(trace.to_string())
}
