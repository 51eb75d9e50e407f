//! Generation of the logical specification equivalent to a pattern
//! expression: each pattern carries a fixed tuple of entry/exit markers and
//! formula templates over its formal arguments; instantiating the templates
//! bottom-up over the tree, with nested arguments represented by the
//! disjunction of their entry and exit activities, yields the specification.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::OnceLock;

use thiserror::Error;

use crate::pltl::{parse_formula, print_formula, PltlFormula};
use crate::workflow::{Atom, Decoration, PatternExpr, PatternKind};

/// The fixed property tuple of one pattern: which argument slots carry the
/// entry and exit activities, and the formula templates over the formal
/// arguments `a1..a4`. A decorated `aN^+` / `aN^-` in a template stands for
/// the guard outcome of the argument's entry activity.
#[derive(Debug, Clone)]
pub struct PatternTemplate {
    pub kind: PatternKind,
    pub entry_slot: usize,
    pub exit_slot: usize,
    pub formulas: Vec<PltlFormula>,
}

const SEQ_ROW: (usize, usize, &[&str]) =
    (0, 1, &["<>a1", "[](a1 -> <>a2)", "[]!(a1 & a2)"]);

const SEQSEQ_ROW: (usize, usize, &[&str]) = (
    0,
    2,
    &["<>a1", "[](a1 -> <>a2)", "[](a2 -> <>a3)", "[]!(a1 & a2)", "[]!(a2 & a3)"],
);

const COND_ROW: (usize, usize, &[&str]) = (
    0,
    3,
    &[
        "<>a1",
        "[](a1 -> (<>a2 & !<>a3) | (!<>a2 & <>a3))",
        "[](a1^+ -> <>a2)",
        "[](a1^- -> <>a3)",
        "[](a2 | a3 -> <>a4)",
        "[]!(a1 & (a2 | a3))",
        "[]!((a2 | a3) & a4)",
    ],
);

const PARA_ROW: (usize, usize, &[&str]) = (
    0,
    3,
    &[
        "<>a1",
        "[](a1 -> <>a2 & <>a3)",
        "[](a2 -> <>a4)",
        "[](a3 -> <>a4)",
        "[]!(a1 & (a2 | a3))",
        "[]!((a2 | a3) & a4)",
    ],
);

const ALT_ROW: (usize, usize, &[&str]) = (
    0,
    2,
    &[
        "<>a1",
        "[](a1^+ -> <>a2)",
        "[](a1^- -> !<>a2 & <>a3)",
        "[](a2 -> <>a3)",
        "[]!(a1 & a2)",
        "[]!(a1 & a3)",
        "[]!(a2 & a3)",
    ],
);

const LOOP_ROW: (usize, usize, &[&str]) = (
    0,
    3,
    &[
        "<>a1",
        "[](a1 -> <>a2)",
        "[](a2 -> (<>a3 & <>a4) | (!<>a3 & <>a4))",
        "[](a2 & a2^+ -> <>a3)",
        "[](a2 & a2^- -> !<>a3 & <>a4)",
        "[](a3 -> <>a2)",
        "[](a4 -> !<>a2 & !<>a3)",
        "[]!(a1 & (a2 | a3 | a4))",
        "[]!(a2 & (a1 | a3 | a4))",
        "[]!(a3 & (a1 | a2 | a4))",
        "[]!(a4 & (a1 | a2 | a3))",
    ],
);

fn build_template(kind: PatternKind) -> PatternTemplate {
    let (entry_slot, exit_slot, rows) = match kind {
        PatternKind::Seq => SEQ_ROW,
        PatternKind::SeqSeq => SEQSEQ_ROW,
        PatternKind::Cond => COND_ROW,
        PatternKind::Alt => ALT_ROW,
        PatternKind::Para => PARA_ROW,
        PatternKind::Loop => LOOP_ROW,
    };
    let formulas = rows
        .iter()
        .map(|text| parse_formula(text).expect("template formulas are well-formed"))
        .collect();
    PatternTemplate { kind, entry_slot, exit_slot, formulas }
}

/// The six fixed pattern templates.
pub fn templates() -> &'static [PatternTemplate; 6] {
    static TEMPLATES: OnceLock<[PatternTemplate; 6]> = OnceLock::new();
    TEMPLATES.get_or_init(|| PatternKind::ALL.map(build_template))
}

pub fn template_for(kind: PatternKind) -> &'static PatternTemplate {
    &templates()[PatternKind::ALL.iter().position(|k| *k == kind).unwrap()]
}

/// The entry activity of an expression: an activity is its own entry; a
/// pattern's entry is the entry of its entry-slot argument.
pub fn entry(expr: &PatternExpr) -> Atom {
    match expr {
        PatternExpr::Activity(a) => a.atom.clone(),
        PatternExpr::Node(n) => entry(&n.args()[template_for(n.kind()).entry_slot]),
    }
}

/// The exit activity, symmetric to [`entry`].
pub fn exit(expr: &PatternExpr) -> Atom {
    match expr {
        PatternExpr::Activity(a) => a.atom.clone(),
        PatternExpr::Node(n) => exit(&n.args()[template_for(n.kind()).exit_slot]),
    }
}

/// The formula substituted for an argument inside an enclosing template:
/// an activity stands for itself, a nested pattern for the disjunction of
/// its entry and exit activities.
pub fn arg_repr(expr: &PatternExpr) -> PltlFormula {
    match expr {
        PatternExpr::Activity(a) => PltlFormula::Prop(a.atom.clone()),
        PatternExpr::Node(_) => PltlFormula::or(
            PltlFormula::Prop(entry(expr)),
            PltlFormula::Prop(exit(expr)),
        ),
    }
}

/// The generated logical specification: an ordered, duplicate-free set of
/// formulas plus the root entry/exit markers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecSet {
    pub formulas: Vec<PltlFormula>,
    pub root_entry: Atom,
    pub root_exit: Atom,
}

impl SpecSet {
    /// Atoms of all formulas in first-occurrence order.
    pub fn alphabet(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for f in &self.formulas {
            for a in f.atoms() {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }

    /// Canonical formula strings as a set, for order-insensitive comparison.
    pub fn formula_set(&self) -> BTreeSet<String> {
        self.formulas.iter().map(print_formula).collect()
    }

    pub fn push_unique(&mut self, f: PltlFormula) {
        if !self.formulas.contains(&f) {
            self.formulas.push(f);
        }
    }

    /// One canonical formula per line, preceded by a header naming the
    /// root entry and exit markers.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# wflc:spec:v1 entry={} exit={}", self.root_entry, self.root_exit).unwrap();
        for f in &self.formulas {
            writeln!(out, "{}", print_formula(f)).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SpecSet, SpecTextError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(SpecTextError::MissingHeader)?;
        let rest = header
            .strip_prefix("# wflc:spec:v1")
            .ok_or_else(|| SpecTextError::MissingHeader)?;
        let mut root_entry = None;
        let mut root_exit = None;
        for field in rest.split_whitespace() {
            if let Some(v) = field.strip_prefix("entry=") {
                root_entry = Some(parse_marker(v)?);
            } else if let Some(v) = field.strip_prefix("exit=") {
                root_exit = Some(parse_marker(v)?);
            }
        }
        let (root_entry, root_exit) = match (root_entry, root_exit) {
            (Some(e), Some(x)) => (e, x),
            _ => return Err(SpecTextError::MissingHeader),
        };
        let mut spec = SpecSet { formulas: Vec::new(), root_entry, root_exit };
        for (lineno, line) in text.lines().enumerate().skip(1) {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f = parse_formula(line)
                .map_err(|e| SpecTextError::Formula { line: lineno + 1, source: e })?;
            spec.push_unique(f);
        }
        Ok(spec)
    }
}

fn parse_marker(text: &str) -> Result<Atom, SpecTextError> {
    match parse_formula(text) {
        Ok(PltlFormula::Prop(a)) => Ok(a),
        _ => Err(SpecTextError::BadMarker(text.to_string())),
    }
}

#[derive(Debug, Error)]
pub enum SpecTextError {
    #[error("missing or malformed '# wflc:spec:v1 entry=.. exit=..' header")]
    MissingHeader,
    #[error("entry/exit marker {0:?} is not an atom")]
    BadMarker(String),
    #[error("line {line}: {source}")]
    Formula {
        line: usize,
        source: crate::pltl::FormulaSyntaxError,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecGenError {
    #[error("the root of a specification must be a pattern, not a bare activity")]
    RootIsActivity,
}

/// Substitute actual arguments into one template formula. An undecorated
/// formal argument becomes the argument's representation; a decorated one
/// becomes the argument's entry activity carrying that decoration.
fn instantiate(template: &PltlFormula, args: &[PatternExpr]) -> PltlFormula {
    match template {
        PltlFormula::Prop(placeholder) => {
            let slot = match placeholder.name() {
                "a1" => 0,
                "a2" => 1,
                "a3" => 2,
                "a4" => 3,
                other => unreachable!("unknown template placeholder {other}"),
            };
            let arg = &args[slot];
            match placeholder.decoration() {
                Decoration::None => arg_repr(arg),
                dec => PltlFormula::Prop(entry(arg).decorated(dec)),
            }
        }
        PltlFormula::Not(x) => PltlFormula::not(instantiate(x, args)),
        PltlFormula::And(a, b) => PltlFormula::and(instantiate(a, args), instantiate(b, args)),
        PltlFormula::Or(a, b) => PltlFormula::or(instantiate(a, args), instantiate(b, args)),
        PltlFormula::Implies(a, b) => {
            PltlFormula::implies(instantiate(a, args), instantiate(b, args))
        }
        PltlFormula::Always(x) => PltlFormula::always(instantiate(x, args)),
        PltlFormula::Sometime(x) => PltlFormula::sometime(instantiate(x, args)),
    }
}

/// Generate the logical specification for a pattern expression. Output
/// order is deterministic: post-order over the tree, template order within
/// a node; duplicates arising from repeated substructure are dropped.
pub fn pi_c(expr: &PatternExpr) -> Result<SpecSet, SpecGenError> {
    let PatternExpr::Node(_) = expr else {
        return Err(SpecGenError::RootIsActivity);
    };
    let mut spec = SpecSet {
        formulas: Vec::new(),
        root_entry: entry(expr),
        root_exit: exit(expr),
    };
    fn walk(e: &PatternExpr, spec: &mut SpecSet) {
        if let PatternExpr::Node(n) = e {
            for arg in n.args() {
                walk(arg, spec);
            }
            let template = template_for(n.kind());
            for tf in &template.formulas {
                spec.push_unique(instantiate(tf, n.args()));
            }
        }
    }
    walk(expr, &mut spec);
    Ok(spec)
}
