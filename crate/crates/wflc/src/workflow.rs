//! Core workflow domain: atomic activities, the six approved composition
//! patterns, diagram documents with call-behaviour actions, and the scan
//! step that flattens a diagram into a pattern expression.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Guard-outcome marker on a proposition. Decorated atoms appear only in
/// generated logic, never on pattern-expression leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Decoration {
    #[default]
    None,
    Plus,
    Minus,
}

/// A propositional atom: an identifier plus a prime count and an optional
/// guard-outcome decoration. Primes mark copies created when a called
/// diagram is inlined; each copy is a fresh proposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    name: String,
    primes: u32,
    decoration: Decoration,
}

pub const PATTERN_KEYWORDS: [&str; 6] = ["Seq", "SeqSeq", "Cond", "Alt", "Para", "Loop"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtomError {
    #[error("atom name is empty")]
    Empty,
    #[error("atom name {0:?} contains an invalid character")]
    InvalidChar(String),
    #[error("atom name {0:?} is a pattern keyword")]
    Keyword(String),
}

impl Atom {
    /// An undecorated, unprimed atom. Names are letters, digits and
    /// underscores; purely numeric names are allowed.
    pub fn new(name: &str) -> Result<Self, AtomError> {
        Self::with(name, 0, Decoration::None)
    }

    pub fn with(name: &str, primes: u32, decoration: Decoration) -> Result<Self, AtomError> {
        if name.is_empty() {
            return Err(AtomError::Empty);
        }
        if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(AtomError::InvalidChar(name.to_string()));
        }
        if PATTERN_KEYWORDS.contains(&name) {
            return Err(AtomError::Keyword(name.to_string()));
        }
        Ok(Atom { name: name.to_string(), primes, decoration })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn primes(&self) -> u32 {
        self.primes
    }

    pub fn decoration(&self) -> Decoration {
        self.decoration
    }

    /// The same atom with `extra` additional prime marks.
    pub fn primed(&self, extra: u32) -> Atom {
        Atom { name: self.name.clone(), primes: self.primes + extra, decoration: self.decoration }
    }

    /// The same atom carrying a guard-outcome decoration.
    pub fn decorated(&self, decoration: Decoration) -> Atom {
        Atom { name: self.name.clone(), primes: self.primes, decoration }
    }

    /// The atom without its decoration.
    pub fn base(&self) -> Atom {
        self.decorated(Decoration::None)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for _ in 0..self.primes {
            write!(f, "'")?;
        }
        match self.decoration {
            Decoration::None => Ok(()),
            Decoration::Plus => write!(f, "^+"),
            Decoration::Minus => write!(f, "^-"),
        }
    }
}

/// The six approved workflow patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternKind {
    Seq,
    SeqSeq,
    Cond,
    Alt,
    Para,
    Loop,
}

impl PatternKind {
    pub fn arity(self) -> usize {
        match self {
            PatternKind::Seq => 2,
            PatternKind::SeqSeq | PatternKind::Alt => 3,
            PatternKind::Cond | PatternKind::Para | PatternKind::Loop => 4,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            PatternKind::Seq => "Seq",
            PatternKind::SeqSeq => "SeqSeq",
            PatternKind::Cond => "Cond",
            PatternKind::Alt => "Alt",
            PatternKind::Para => "Para",
            PatternKind::Loop => "Loop",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "Seq" => Some(PatternKind::Seq),
            "SeqSeq" => Some(PatternKind::SeqSeq),
            "Cond" => Some(PatternKind::Cond),
            "Alt" => Some(PatternKind::Alt),
            "Para" => Some(PatternKind::Para),
            "Loop" => Some(PatternKind::Loop),
            _ => None,
        }
    }

    pub const ALL: [PatternKind; 6] = [
        PatternKind::Seq,
        PatternKind::SeqSeq,
        PatternKind::Cond,
        PatternKind::Alt,
        PatternKind::Para,
        PatternKind::Loop,
    ];
}

/// An activity leaf. Parameters are carried through to code generation as
/// comments only; they never become actual arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Activity {
    pub atom: Atom,
    pub params: Vec<String>,
}

impl Activity {
    pub fn new(atom: Atom) -> Self {
        Activity { atom, params: Vec::new() }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{kind:?} requires {expected} arguments, found {found}")]
pub struct ArityError {
    pub kind: PatternKind,
    pub expected: usize,
    pub found: usize,
}

/// A pattern node with its arity enforced at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternNode {
    kind: PatternKind,
    args: Vec<PatternExpr>,
}

impl PatternNode {
    pub fn new(kind: PatternKind, args: Vec<PatternExpr>) -> Result<Self, ArityError> {
        if args.len() != kind.arity() {
            return Err(ArityError { kind, expected: kind.arity(), found: args.len() });
        }
        Ok(PatternNode { kind, args })
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn args(&self) -> &[PatternExpr] {
        &self.args
    }
}

/// A workflow term over the approved patterns with activities at the leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternExpr {
    Activity(Activity),
    Node(PatternNode),
}

impl PatternExpr {
    pub fn activity(name: &str) -> Self {
        PatternExpr::Activity(Activity::new(Atom::new(name).expect("valid atom name")))
    }

    pub fn pattern(kind: PatternKind, args: Vec<PatternExpr>) -> Result<Self, ArityError> {
        Ok(PatternExpr::Node(PatternNode::new(kind, args)?))
    }

    pub fn seq(a: PatternExpr, b: PatternExpr) -> Self {
        Self::pattern(PatternKind::Seq, vec![a, b]).unwrap()
    }

    pub fn seqseq(a: PatternExpr, b: PatternExpr, c: PatternExpr) -> Self {
        Self::pattern(PatternKind::SeqSeq, vec![a, b, c]).unwrap()
    }

    pub fn cond(a: PatternExpr, b: PatternExpr, c: PatternExpr, d: PatternExpr) -> Self {
        Self::pattern(PatternKind::Cond, vec![a, b, c, d]).unwrap()
    }

    pub fn alt(a: PatternExpr, b: PatternExpr, c: PatternExpr) -> Self {
        Self::pattern(PatternKind::Alt, vec![a, b, c]).unwrap()
    }

    pub fn para(a: PatternExpr, b: PatternExpr, c: PatternExpr, d: PatternExpr) -> Self {
        Self::pattern(PatternKind::Para, vec![a, b, c, d]).unwrap()
    }

    pub fn looped(a: PatternExpr, b: PatternExpr, c: PatternExpr, d: PatternExpr) -> Self {
        Self::pattern(PatternKind::Loop, vec![a, b, c, d]).unwrap()
    }

    pub fn is_activity(&self) -> bool {
        matches!(self, PatternExpr::Activity(_))
    }

    /// Number of pattern nodes (activities excluded).
    pub fn node_count(&self) -> usize {
        match self {
            PatternExpr::Activity(_) => 0,
            PatternExpr::Node(n) => 1 + n.args().iter().map(PatternExpr::node_count).sum::<usize>(),
        }
    }
}

/// All distinct leaf atoms in left-to-right order.
pub fn atoms_of(expr: &PatternExpr) -> Vec<Atom> {
    fn walk(e: &PatternExpr, out: &mut Vec<Atom>) {
        match e {
            PatternExpr::Activity(a) => {
                if !out.contains(&a.atom) {
                    out.push(a.atom.clone());
                }
            }
            PatternExpr::Node(n) => n.args().iter().for_each(|a| walk(a, out)),
        }
    }
    let mut out = Vec::new();
    walk(expr, &mut out);
    out
}

/// A diagram body: a pattern expression whose leaves may additionally be
/// call-behaviour actions referring to another diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramExpr {
    Activity(Activity),
    Call(String),
    Node(PatternKind, Vec<DiagramExpr>),
}

impl DiagramExpr {
    pub fn validate(&self) -> Result<(), ArityError> {
        match self {
            DiagramExpr::Activity(_) | DiagramExpr::Call(_) => Ok(()),
            DiagramExpr::Node(kind, args) => {
                if args.len() != kind.arity() {
                    return Err(ArityError { kind: *kind, expected: kind.arity(), found: args.len() });
                }
                args.iter().try_for_each(DiagramExpr::validate)
            }
        }
    }
}

/// A structured diagram document: a body plus the context of diagrams it
/// may call. The call graph must be acyclic and every call resolvable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramDoc {
    pub id: String,
    pub body: DiagramExpr,
    pub context: BTreeMap<String, DiagramExpr>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WorkflowError {
    #[error("call target {0:?} is not present in the diagram context")]
    UnresolvedCall(String),
    #[error("cyclic call chain: {}", .0.join(" -> "))]
    CyclicCall(Vec<String>),
    #[error(transparent)]
    Arity(#[from] ArityError),
}

/// Replace every call-behaviour leaf by the called diagram's body, adding
/// one prime per inlining level so copied atoms stay fresh. Atoms of the
/// host diagram are unchanged.
pub fn inline_calls(doc: &DiagramDoc) -> Result<PatternExpr, WorkflowError> {
    fn go(
        expr: &DiagramExpr,
        ctx: &BTreeMap<String, DiagramExpr>,
        depth: u32,
        stack: &mut Vec<String>,
    ) -> Result<PatternExpr, WorkflowError> {
        match expr {
            DiagramExpr::Activity(a) => Ok(PatternExpr::Activity(Activity {
                atom: a.atom.primed(depth),
                params: a.params.clone(),
            })),
            DiagramExpr::Call(target) => {
                if stack.iter().any(|s| s == target) {
                    let mut chain = stack.clone();
                    chain.push(target.clone());
                    return Err(WorkflowError::CyclicCall(chain));
                }
                let body = ctx
                    .get(target)
                    .ok_or_else(|| WorkflowError::UnresolvedCall(target.clone()))?;
                stack.push(target.clone());
                let inlined = go(body, ctx, depth + 1, stack);
                stack.pop();
                inlined
            }
            DiagramExpr::Node(kind, args) => {
                let args = args
                    .iter()
                    .map(|a| go(a, ctx, depth, stack))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(PatternExpr::pattern(*kind, args)?)
            }
        }
    }
    doc.body.validate()?;
    for body in doc.context.values() {
        body.validate()?;
    }
    let mut stack = vec![doc.id.clone()];
    go(&doc.body, &doc.context, 0, &mut stack)
}

/// The diagram-to-expression scan step: for a compositionally formed
/// diagram this is call inlining, nothing more.
pub fn pi_scan(doc: &DiagramDoc) -> Result<PatternExpr, WorkflowError> {
    inline_calls(doc)
}

/// One identified activity: normalized identifier, attached parameters,
/// and the source phrase it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabEntry {
    pub name: String,
    pub phrase: String,
    #[serde(default)]
    pub params: Vec<String>,
    pub occurrences: usize,
}

/// The activity vocabulary extracted from one scenario, with an index of
/// which source (diagram or scenario) each activity belongs to.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub entries: Vec<VocabEntry>,
    #[serde(default)]
    pub index: BTreeMap<String, Vec<String>>,
    /// Parameter tags that had no preceding activity to attach to.
    #[serde(default)]
    pub orphan_params: Vec<String>,
}

impl Vocabulary {
    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|e| e.name == name)
    }
}
