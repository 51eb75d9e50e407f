//! Translation of temporal formulas to first-order TPTP text. Each
//! proposition becomes a unary predicate over a time sort; `[]` and `<>`
//! become universal and existential quantifiers.
//!
//! Two modes: `simple` quantifies over all of time with no ordering at all,
//! `ordered` relativizes every quantifier to a reflexive-transitive `leq`
//! relation whose axioms are emitted once per problem.

use crate::pltl::PltlFormula;
use crate::workflow::{Atom, Decoration};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FolMode {
    /// Plain quantifier substitution, no ordering relation.
    #[default]
    Simple,
    /// Quantifiers relativized to `leq(now, T)`.
    Ordered,
}

impl FolMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FolMode::Simple => "simple",
            FolMode::Ordered => "ordered",
        }
    }
}

/// TPTP predicate name for an atom: lowercase-led, primes become `_c`,
/// decorations `_plus` / `_minus`.
pub fn predicate_name(atom: &Atom) -> String {
    let mut s = String::from("p");
    s.push_str(atom.name());
    for _ in 0..atom.primes() {
        s.push_str("_c");
    }
    match atom.decoration() {
        Decoration::None => {}
        Decoration::Plus => s.push_str("_plus"),
        Decoration::Minus => s.push_str("_minus"),
    }
    s
}

/// The distinguished initial time constant.
pub const INITIAL_TIME: &str = "t0";

/// First-order formula text in TPTP fof syntax, evaluated at the initial
/// time constant. Composite subformulas are fully parenthesized, which is
/// always valid fof.
pub fn to_fol(f: &PltlFormula, mode: FolMode) -> String {
    fn go(f: &PltlFormula, time: &str, mode: FolMode, fresh: &mut u32) -> String {
        match f {
            PltlFormula::Prop(a) => format!("{}({})", predicate_name(a), time),
            PltlFormula::Not(x) => format!("~({})", go(x, time, mode, fresh)),
            PltlFormula::And(a, b) => {
                format!("({} & {})", go(a, time, mode, fresh), go(b, time, mode, fresh))
            }
            PltlFormula::Or(a, b) => {
                format!("({} | {})", go(a, time, mode, fresh), go(b, time, mode, fresh))
            }
            PltlFormula::Implies(a, b) => {
                format!("({} => {})", go(a, time, mode, fresh), go(b, time, mode, fresh))
            }
            PltlFormula::Always(x) => {
                *fresh += 1;
                let v = format!("T{fresh}");
                let body = go(x, &v, mode, fresh);
                match mode {
                    FolMode::Simple => format!("(! [{v}] : {body})"),
                    FolMode::Ordered => format!("(! [{v}] : (leq({time},{v}) => {body}))"),
                }
            }
            PltlFormula::Sometime(x) => {
                *fresh += 1;
                let v = format!("T{fresh}");
                let body = go(x, &v, mode, fresh);
                match mode {
                    FolMode::Simple => format!("(? [{v}] : {body})"),
                    FolMode::Ordered => format!("(? [{v}] : (leq({time},{v}) & {body}))"),
                }
            }
        }
    }
    let mut fresh = 0;
    go(f, INITIAL_TIME, mode, &mut fresh)
}

/// The `leq` ordering axioms emitted once per ordered-mode problem.
pub fn ordering_axioms() -> Vec<(&'static str, &'static str)> {
    vec![
        ("leq_reflexive", "! [X] : leq(X,X)"),
        ("leq_transitive", "! [X,Y,Z] : ((leq(X,Y) & leq(Y,Z)) => leq(X,Z))"),
    ]
}
