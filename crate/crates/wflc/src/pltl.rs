//! Propositional linear-time temporal logic over decorated atoms, with the
//! two modal operators `[]` (always) and `<>` (sometime), an ASCII concrete
//! syntax, and finite-trace evaluation.
//!
//! ASCII grammar: `!` not, `&` and, `|` or, `->` implies (right-assoc),
//! `[]` always, `<>` sometime, `'` prime, `^+` / `^-` decorations,
//! parentheses. Precedence: unary > `&` > `|` > `->`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::workflow::{Atom, Decoration, PatternKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PltlFormula {
    Prop(Atom),
    Not(Box<PltlFormula>),
    And(Box<PltlFormula>, Box<PltlFormula>),
    Or(Box<PltlFormula>, Box<PltlFormula>),
    Implies(Box<PltlFormula>, Box<PltlFormula>),
    Always(Box<PltlFormula>),
    Sometime(Box<PltlFormula>),
}

impl PltlFormula {
    pub fn prop(atom: Atom) -> Self {
        PltlFormula::Prop(atom)
    }

    pub fn not(f: PltlFormula) -> Self {
        PltlFormula::Not(Box::new(f))
    }

    pub fn and(a: PltlFormula, b: PltlFormula) -> Self {
        PltlFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PltlFormula, b: PltlFormula) -> Self {
        PltlFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: PltlFormula, b: PltlFormula) -> Self {
        PltlFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn always(f: PltlFormula) -> Self {
        PltlFormula::Always(Box::new(f))
    }

    pub fn sometime(f: PltlFormula) -> Self {
        PltlFormula::Sometime(Box::new(f))
    }

    /// Atoms in first-occurrence order.
    pub fn atoms(&self) -> Vec<Atom> {
        fn walk(f: &PltlFormula, out: &mut Vec<Atom>) {
            match f {
                PltlFormula::Prop(a) => {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                PltlFormula::Not(x) | PltlFormula::Always(x) | PltlFormula::Sometime(x) => walk(x, out),
                PltlFormula::And(a, b) | PltlFormula::Or(a, b) | PltlFormula::Implies(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {position}: {message}")]
pub struct FormulaSyntaxError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, FormulaSyntaxError> {
    Err(FormulaSyntaxError { position, message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(Atom),
    Not,
    And,
    Or,
    Implies,
    Always,
    Sometime,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaSyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'!' => {
                out.push((start, Tok::Not));
                i += 1;
            }
            b'&' => {
                out.push((start, Tok::And));
                i += 1;
            }
            b'|' => {
                out.push((start, Tok::Or));
                i += 1;
            }
            b'(' => {
                out.push((start, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((start, Tok::RParen));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((start, Tok::Implies));
                    i += 2;
                } else {
                    return err(i, "expected '->'");
                }
            }
            b'[' => {
                if bytes.get(i + 1) == Some(&b']') {
                    out.push((start, Tok::Always));
                    i += 2;
                } else {
                    return err(i, "expected '[]'");
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((start, Tok::Sometime));
                    i += 2;
                } else {
                    return err(i, "expected '<>'");
                }
            }
            c if (c as char).is_ascii_alphanumeric() || c == b'_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let name = &text[start..i];
                if PatternKind::from_keyword(name).is_some() {
                    return err(start, format!("pattern keyword {name:?} is not a proposition"));
                }
                let mut primes = 0;
                while i < bytes.len() && bytes[i] == b'\'' {
                    primes += 1;
                    i += 1;
                }
                let decoration = if bytes.get(i) == Some(&b'^') {
                    match bytes.get(i + 1) {
                        Some(b'+') => {
                            i += 2;
                            Decoration::Plus
                        }
                        Some(b'-') => {
                            i += 2;
                            Decoration::Minus
                        }
                        _ => return err(i, "expected '^+' or '^-'"),
                    }
                } else {
                    Decoration::None
                };
                let atom = Atom::with(name, primes, decoration)
                    .map_err(|e| FormulaSyntaxError { position: start, message: e.to_string() })?;
                out.push((start, Tok::Atom(atom)));
            }
            other => return err(i, format!("unexpected character {:?}", other as char)),
        }
    }
    Ok(out)
}

struct FParser<'a> {
    tokens: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl FParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn implies(&mut self) -> Result<PltlFormula, FormulaSyntaxError> {
        let left = self.or()?;
        if matches!(self.peek(), Some(Tok::Implies)) {
            self.pos += 1;
            let right = self.implies()?;
            return Ok(PltlFormula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<PltlFormula, FormulaSyntaxError> {
        let mut acc = self.and()?;
        while matches!(self.peek(), Some(Tok::Or)) {
            self.pos += 1;
            acc = PltlFormula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<PltlFormula, FormulaSyntaxError> {
        let mut acc = self.unary()?;
        while matches!(self.peek(), Some(Tok::And)) {
            self.pos += 1;
            acc = PltlFormula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PltlFormula, FormulaSyntaxError> {
        match self.tokens.get(self.pos) {
            Some((_, Tok::Not)) => {
                self.pos += 1;
                Ok(PltlFormula::not(self.unary()?))
            }
            Some((_, Tok::Always)) => {
                self.pos += 1;
                Ok(PltlFormula::always(self.unary()?))
            }
            Some((_, Tok::Sometime)) => {
                self.pos += 1;
                Ok(PltlFormula::sometime(self.unary()?))
            }
            Some((_, Tok::Atom(a))) => {
                self.pos += 1;
                Ok(PltlFormula::Prop(a.clone()))
            }
            Some((_, Tok::LParen)) => {
                self.pos += 1;
                let inner = self.implies()?;
                match self.tokens.get(self.pos) {
                    Some((_, Tok::RParen)) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some((p, t)) => err(*p, format!("expected ')', found {t:?}")),
                    None => err(self.end, "unbalanced parentheses"),
                }
            }
            Some((p, t)) => err(*p, format!("expected a formula, found {t:?}")),
            None => err(self.end, "expected a formula, found end of input"),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<PltlFormula, FormulaSyntaxError> {
    let tokens = lex(text)?;
    if tokens.is_empty() {
        return err(text.len(), "empty input");
    }
    let mut p = FParser { tokens: &tokens, pos: 0, end: text.len() };
    let f = p.implies()?;
    if p.pos != tokens.len() {
        return err(p.here(), "unexpected trailing input");
    }
    Ok(f)
}

// Precedence levels for minimal-parentheses printing.
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

/// Canonical minimal-parentheses text; `parse_formula(print_formula(f)) == f`.
pub fn print_formula(f: &PltlFormula) -> String {
    fn go(f: &PltlFormula, min: u8, out: &mut String) {
        let prec = match f {
            PltlFormula::Prop(_) => PREC_UNARY + 1,
            PltlFormula::Not(_) | PltlFormula::Always(_) | PltlFormula::Sometime(_) => PREC_UNARY,
            PltlFormula::And(..) => PREC_AND,
            PltlFormula::Or(..) => PREC_OR,
            PltlFormula::Implies(..) => PREC_IMPLIES,
        };
        let parens = prec < min;
        if parens {
            out.push('(');
        }
        match f {
            PltlFormula::Prop(a) => out.push_str(&a.to_string()),
            PltlFormula::Not(x) => {
                out.push('!');
                go(x, PREC_UNARY, out);
            }
            PltlFormula::Always(x) => {
                out.push_str("[]");
                go(x, PREC_UNARY, out);
            }
            PltlFormula::Sometime(x) => {
                out.push_str("<>");
                go(x, PREC_UNARY, out);
            }
            PltlFormula::And(a, b) => {
                go(a, PREC_AND, out);
                out.push_str(" & ");
                go(b, PREC_AND + 1, out);
            }
            PltlFormula::Or(a, b) => {
                go(a, PREC_OR, out);
                out.push_str(" | ");
                go(b, PREC_OR + 1, out);
            }
            PltlFormula::Implies(a, b) => {
                go(a, PREC_IMPLIES + 1, out);
                out.push_str(" -> ");
                go(b, PREC_IMPLIES, out);
            }
        }
        if parens {
            out.push(')');
        }
    }
    let mut out = String::new();
    go(f, 0, &mut out);
    out
}

impl fmt::Display for PltlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_formula(self))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("a trace must contain at least one state")]
    Empty,
    #[error("trace alphabet is limited to 64 atoms, got {0}")]
    AlphabetTooLarge(usize),
    #[error("trace length is limited to 64 states, got {0}")]
    TooLong(usize),
    #[error("duplicate atom {0} in trace alphabet")]
    DuplicateAtom(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("position {position} is out of range for a trace of length {len}")]
pub struct PositionError {
    pub position: usize,
    pub len: usize,
}

/// A finite, non-empty sequence of states over a declared alphabet; each
/// state is the set of atoms true at that position, stored as a bitmask in
/// alphabet order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    alphabet: Vec<Atom>,
    index: HashMap<Atom, usize>,
    states: Vec<u64>,
}

impl Trace {
    pub fn new(alphabet: Vec<Atom>, states: Vec<u64>) -> Result<Self, TraceError> {
        if states.is_empty() {
            return Err(TraceError::Empty);
        }
        if alphabet.len() > 64 {
            return Err(TraceError::AlphabetTooLarge(alphabet.len()));
        }
        if states.len() > 64 {
            return Err(TraceError::TooLong(states.len()));
        }
        let mut index = HashMap::with_capacity(alphabet.len());
        for (i, atom) in alphabet.iter().enumerate() {
            if index.insert(atom.clone(), i).is_some() {
                return Err(TraceError::DuplicateAtom(atom.to_string()));
            }
        }
        Ok(Trace { alphabet, index, states })
    }

    /// Build from explicit atom sets; atoms absent from the alphabet are
    /// rejected by masking (they cannot be represented).
    pub fn from_sets(alphabet: Vec<Atom>, sets: &[Vec<Atom>]) -> Result<Self, TraceError> {
        let tmp = Trace::new(alphabet, vec![0; sets.len().max(1)])?;
        let mut states = Vec::with_capacity(sets.len());
        for set in sets {
            let mut mask = 0u64;
            for atom in set {
                if let Some(&i) = tmp.index.get(atom) {
                    mask |= 1 << i;
                }
            }
            states.push(mask);
        }
        Trace::new(tmp.alphabet, states)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn alphabet(&self) -> &[Atom] {
        &self.alphabet
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    /// Whether `atom` is true at `pos`. Atoms outside the alphabet are
    /// never true.
    pub fn holds(&self, atom: &Atom, pos: usize) -> bool {
        match self.index.get(atom) {
            Some(&i) => self.states[pos] & (1 << i) != 0,
            None => false,
        }
    }

    pub fn state_atoms(&self, pos: usize) -> Vec<Atom> {
        self.alphabet
            .iter()
            .enumerate()
            .filter(|(i, _)| self.states[pos] & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for pos in 0..self.len() {
            if pos > 0 {
                write!(f, " ")?;
            }
            write!(f, "{{")?;
            for (i, a) in self.state_atoms(pos).iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "]")
    }
}

/// Evaluate `f` on a finite trace at position `i`. `[]f` holds at `i` iff
/// `f` holds at every `j >= i`; `<>f` iff it holds at some `j >= i`.
pub fn eval(f: &PltlFormula, trace: &Trace, i: usize) -> Result<bool, PositionError> {
    if i >= trace.len() {
        return Err(PositionError { position: i, len: trace.len() });
    }
    fn go(f: &PltlFormula, t: &Trace, i: usize) -> bool {
        match f {
            PltlFormula::Prop(a) => t.holds(a, i),
            PltlFormula::Not(x) => !go(x, t, i),
            PltlFormula::And(a, b) => go(a, t, i) && go(b, t, i),
            PltlFormula::Or(a, b) => go(a, t, i) || go(b, t, i),
            PltlFormula::Implies(a, b) => !go(a, t, i) || go(b, t, i),
            PltlFormula::Always(x) => (i..t.len()).all(|j| go(x, t, j)),
            PltlFormula::Sometime(x) => (i..t.len()).any(|j| go(x, t, j)),
        }
    }
    Ok(go(f, trace, i))
}

/// Positions at which `f` holds, as a bitmask over `0..trace.len()`.
/// Computed bottom-up in one pass per subformula, so a whole-trace
/// evaluation is linear in `|f| * len` rather than recursive per position.
pub fn holds_positions(f: &PltlFormula, trace: &Trace) -> u64 {
    let len = trace.len();
    let full: u64 = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    fn go(f: &PltlFormula, t: &Trace, len: usize, full: u64) -> u64 {
        match f {
            PltlFormula::Prop(a) => {
                let mut m = 0u64;
                for pos in 0..len {
                    if t.holds(a, pos) {
                        m |= 1 << pos;
                    }
                }
                m
            }
            PltlFormula::Not(x) => !go(x, t, len, full) & full,
            PltlFormula::And(a, b) => go(a, t, len, full) & go(b, t, len, full),
            PltlFormula::Or(a, b) => go(a, t, len, full) | go(b, t, len, full),
            PltlFormula::Implies(a, b) => (!go(a, t, len, full) & full) | go(b, t, len, full),
            PltlFormula::Always(x) => {
                let m = go(x, t, len, full);
                let mut out = 0u64;
                let mut all = true;
                for pos in (0..len).rev() {
                    all = all && (m & (1 << pos) != 0);
                    if all {
                        out |= 1 << pos;
                    }
                }
                out
            }
            PltlFormula::Sometime(x) => {
                let m = go(x, t, len, full);
                let mut out = 0u64;
                let mut any = false;
                for pos in (0..len).rev() {
                    any = any || (m & (1 << pos) != 0);
                    if any {
                        out |= 1 << pos;
                    }
                }
                out
            }
        }
    }
    go(f, trace, len, full)
}

/// Optional reading of guard decorations as refinements of the base atom:
/// for every decorated atom present, `[](a^+ -> a)` / `[](a^- -> a)`, and
/// `[]!(a^+ & a^-)` when both outcomes occur.
pub fn decoration_axioms<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Vec<PltlFormula> {
    let mut plus: Vec<Atom> = Vec::new();
    let mut minus: Vec<Atom> = Vec::new();
    for atom in atoms {
        match atom.decoration() {
            Decoration::Plus => {
                if !plus.contains(&atom.base()) {
                    plus.push(atom.base());
                }
            }
            Decoration::Minus => {
                if !minus.contains(&atom.base()) {
                    minus.push(atom.base());
                }
            }
            Decoration::None => {}
        }
    }
    let mut out = Vec::new();
    let mut bases: Vec<Atom> = Vec::new();
    for a in plus.iter().chain(minus.iter()) {
        if !bases.contains(a) {
            bases.push(a.clone());
        }
    }
    for base in bases {
        let has_plus = plus.contains(&base);
        let has_minus = minus.contains(&base);
        if has_plus {
            out.push(PltlFormula::always(PltlFormula::implies(
                PltlFormula::Prop(base.decorated(Decoration::Plus)),
                PltlFormula::Prop(base.clone()),
            )));
        }
        if has_minus {
            out.push(PltlFormula::always(PltlFormula::implies(
                PltlFormula::Prop(base.decorated(Decoration::Minus)),
                PltlFormula::Prop(base.clone()),
            )));
        }
        if has_plus && has_minus {
            out.push(PltlFormula::always(PltlFormula::not(PltlFormula::and(
                PltlFormula::Prop(base.decorated(Decoration::Plus)),
                PltlFormula::Prop(base.decorated(Decoration::Minus)),
            ))));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Atom {
        let (name, primes) = match s.find('\'') {
            Some(i) => (&s[..i], (s.len() - i) as u32),
            None => (s, 0),
        };
        Atom::with(name, primes, Decoration::None).unwrap()
    }

    fn t(alphabet: &[&str], states: &[&[&str]]) -> Trace {
        let alpha: Vec<Atom> = alphabet.iter().map(|s| atom(s)).collect();
        let sets: Vec<Vec<Atom>> =
            states.iter().map(|st| st.iter().map(|s| atom(s)).collect()).collect();
        Trace::from_sets(alpha, &sets).unwrap()
    }

    #[test]
    fn parses_requirement_shapes() {
        let f = parse_formula("[](4 -> <>11)").unwrap();
        assert_eq!(
            f,
            PltlFormula::always(PltlFormula::implies(
                PltlFormula::Prop(atom("4")),
                PltlFormula::sometime(PltlFormula::Prop(atom("11"))),
            ))
        );
        let g = parse_formula("[]!(3 & 21)").unwrap();
        assert_eq!(
            g,
            PltlFormula::always(PltlFormula::not(PltlFormula::and(
                PltlFormula::Prop(atom("3")),
                PltlFormula::Prop(atom("21")),
            )))
        );
        assert_eq!(parse_formula("a").unwrap(), PltlFormula::Prop(atom("a")));
    }

    #[test]
    fn prints_canonical_forms() {
        let f = PltlFormula::always(PltlFormula::implies(
            PltlFormula::Prop(atom("a")),
            PltlFormula::sometime(PltlFormula::Prop(atom("b"))),
        ));
        assert_eq!(print_formula(&f), "[](a -> <>b)");
        assert_eq!(print_formula(&PltlFormula::sometime(PltlFormula::Prop(atom("1")))), "<>1");
        let plus = Atom::with("a1", 0, Decoration::Plus).unwrap();
        assert_eq!(print_formula(&PltlFormula::Prop(plus)), "a1^+");
    }

    #[test]
    fn decorated_primed_atom_round_trips() {
        let text = "[](20'^+ -> <>(21' | 22'))";
        let f = parse_formula(text).unwrap();
        assert_eq!(print_formula(&f), text);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(print_formula(&parse_formula("a & b | c & d").unwrap()), "a & b | c & d");
        assert_eq!(print_formula(&parse_formula("(a | b) & c").unwrap()), "(a | b) & c");
        assert_eq!(print_formula(&parse_formula("a -> b -> c").unwrap()), "a -> b -> c");
        assert_eq!(print_formula(&parse_formula("(a -> b) -> c").unwrap()), "(a -> b) -> c");
        assert_eq!(print_formula(&parse_formula("a | (b | c)").unwrap()), "a | (b | c)");
        assert_eq!(print_formula(&parse_formula("(a | b) | c").unwrap()), "a | b | c");
    }

    #[test]
    fn eval_matches_stated_cases() {
        let tr = t(&["a", "b"], &[&["a"], &["b"]]);
        assert!(eval(&parse_formula("[](a -> <>b)").unwrap(), &tr, 0).unwrap());
        assert!(eval(&parse_formula("[]!(a & b)").unwrap(), &tr, 0).unwrap());
        let empty = t(&["a"], &[&[], &[]]);
        assert!(!eval(&parse_formula("<>a").unwrap(), &empty, 0).unwrap());
    }

    #[test]
    fn eval_rejects_out_of_range() {
        let tr = t(&["a"], &[&["a"]]);
        assert_eq!(
            eval(&parse_formula("a").unwrap(), &tr, 1),
            Err(PositionError { position: 1, len: 1 })
        );
    }

    #[test]
    fn positions_evaluator_agrees_on_examples() {
        let tr = t(&["a", "b"], &[&["a"], &[], &["b"]]);
        for text in ["<>a", "[]b", "[](a -> <>b)", "a -> b", "!a | <>b & []!a"] {
            let f = parse_formula(text).unwrap();
            let mask = holds_positions(&f, &tr);
            for i in 0..tr.len() {
                assert_eq!(mask & (1 << i) != 0, eval(&f, &tr, i).unwrap(), "{text} at {i}");
            }
        }
    }

    #[test]
    fn decoration_axioms_cover_present_decorations() {
        let atoms = vec![
            Atom::with("2", 0, Decoration::Plus).unwrap(),
            Atom::with("2", 0, Decoration::Minus).unwrap(),
            Atom::with("5", 0, Decoration::Plus).unwrap(),
        ];
        let axioms = decoration_axioms(&atoms);
        let texts: Vec<String> = axioms.iter().map(print_formula).collect();
        assert_eq!(texts, vec!["[](2^+ -> 2)", "[](2^- -> 2)", "[]!(2^+ & 2^-)", "[](5^+ -> 5)"]);
    }

    #[test]
    fn trace_display_is_compact() {
        let tr = t(&["a", "b"], &[&["a", "b"], &[]]);
        assert_eq!(tr.to_string(), "[{a,b} {}]");
    }
}
