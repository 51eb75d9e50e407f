//! Concrete syntax for pattern expressions: a recursive-descent parser, a
//! canonical printer, and a derivation tracer over the numbered production
//! rules of the expression grammar:
//!
//! ```text
//! <Pattern-rules> -> [1] <2-arg-pat> | [2] <3-arg-pat> | [3] <4-arg-pat>
//! <2-arg-pat>     -> [4] Seq <2-args>
//! <3-arg-pat>     -> [5] SeqSeq <3-args> | [6] Alt <3-args>
//! <4-arg-pat>     -> [7] Cond <4-args> | [8] Para <4-args> | [9] Loop <4-args>
//! <2-args>        -> [10] ( <arg> , <arg> )
//! <3-args>        -> [11] ( <arg> , <arg> , <arg> )
//! <4-args>        -> [12] ( <arg> , <arg> , <arg> , <arg> )
//! <arg>           -> [13] <Pattern-rules> | [14] ident(<Java-args>)
//! <Java-args>     -> [15] epsilon
//! ```
//!
//! Activities are accepted both bare (`19`) and with an empty argument list
//! (`CheckPolicy()`); the printer emits the bare form. Apostrophes after an
//! identifier are prime marks.

use std::fmt;

use thiserror::Error;

use crate::workflow::{Activity, Atom, PatternExpr, PatternKind};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { position, message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Keyword(PatternKind),
    Ident(String, u32),
    LParen,
    RParen,
    Comma,
}

fn args_rule(kind: PatternKind) -> u8 {
    match kind.arity() {
        2 => 10,
        3 => 11,
        _ => 12,
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            ',' => {
                tokens.push((i, Token::Comma));
                i += 1;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let mut primes = 0;
                while i < bytes.len() && bytes[i] == b'\'' {
                    primes += 1;
                    i += 1;
                }
                match PatternKind::from_keyword(word) {
                    Some(kind) if primes == 0 => tokens.push((start, Token::Keyword(kind))),
                    Some(_) => return err(start, format!("pattern keyword {word:?} cannot carry prime marks")),
                    None => tokens.push((start, Token::Ident(word.to_string(), primes))),
                }
            }
            '\'' => return err(i, "prime mark must follow an identifier"),
            other => return err(i, format!("unexpected character {other:?}")),
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a (usize, Token)> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a (usize, Token)> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expect(&mut self, want: &Token, what: &str) -> Result<(), SyntaxError> {
        match self.next() {
            Some((_, t)) if t == want => Ok(()),
            Some((p, t)) => err(*p, format!("expected {what}, found {t:?}")),
            None => err(self.end, format!("expected {what}, found end of input")),
        }
    }

    fn parse_arg(&mut self) -> Result<PatternExpr, SyntaxError> {
        match self.next() {
            Some((_, Token::Keyword(kind))) => self.parse_pattern(*kind),
            Some((p, Token::Ident(name, primes))) => {
                let atom = Atom::with(name, *primes, crate::workflow::Decoration::None)
                    .map_err(|e| SyntaxError { position: *p, message: e.to_string() })?;
                // Rules [14]-[15]: an optional, necessarily empty argument list.
                if matches!(self.peek(), Some((_, Token::LParen))) {
                    self.next();
                    match self.next() {
                        Some((_, Token::RParen)) => {}
                        Some((p2, _)) => {
                            return err(*p2, "actual arguments are not supported (rule [15] is empty)")
                        }
                        None => return err(self.end, "unbalanced parentheses after activity"),
                    }
                }
                Ok(PatternExpr::Activity(Activity::new(atom)))
            }
            Some((p, t)) => err(*p, format!("expected a pattern or an activity, found {t:?}")),
            None => err(self.end, "expected a pattern or an activity, found end of input"),
        }
    }

    fn parse_pattern(&mut self, kind: PatternKind) -> Result<PatternExpr, SyntaxError> {
        let arity = kind.arity();
        self.expect(&Token::LParen, &format!("'(' after {}", kind.keyword()))?;
        let mut args = Vec::with_capacity(arity);
        loop {
            args.push(self.parse_arg()?);
            match self.next() {
                Some((_, Token::Comma)) => {
                    if args.len() == arity {
                        return err(
                            self.here(),
                            format!(
                                "{} requires {} arguments (rule [{}]), found more",
                                kind.keyword(),
                                arity,
                                args_rule(kind)
                            ),
                        );
                    }
                }
                Some((p, Token::RParen)) => {
                    if args.len() != arity {
                        return err(
                            *p,
                            format!(
                                "{} requires {} arguments (rule [{}]), found {}",
                                kind.keyword(),
                                arity,
                                args_rule(kind),
                                args.len()
                            ),
                        );
                    }
                    break;
                }
                Some((p, t)) => return err(*p, format!("expected ',' or ')', found {t:?}")),
                None => return err(self.end, "unbalanced parentheses"),
            }
        }
        Ok(PatternExpr::pattern(kind, args).expect("arity checked"))
    }
}

/// Parse a pattern expression. A bare activity is accepted as the
/// degenerate expression so that the printer round-trips.
pub fn parse_expr(text: &str) -> Result<PatternExpr, SyntaxError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return err(text.len(), "empty input");
    }
    let mut parser = Parser { tokens: &tokens, pos: 0, end: text.len() };
    let expr = parser.parse_arg()?;
    if let Some((p, t)) = parser.peek() {
        return err(*p, format!("unexpected trailing input {t:?}"));
    }
    Ok(expr)
}

/// Canonical text: bare atoms, no whitespace, such that
/// `parse_expr(print_expr(e)) == e`.
pub fn print_expr(expr: &PatternExpr) -> String {
    fn go(e: &PatternExpr, out: &mut String) {
        match e {
            PatternExpr::Activity(a) => out.push_str(&a.atom.to_string()),
            PatternExpr::Node(n) => {
                out.push_str(n.kind().keyword());
                out.push('(');
                for (i, arg) in n.args().iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    go(arg, out);
                }
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(expr, &mut out);
    out
}

/// A leftmost-derivation rule sequence for a pattern expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    rules: Vec<u8>,
}

impl DerivationTrace {
    pub fn rules(&self) -> &[u8] {
        &self.rules
    }

    pub fn from_rules(rules: Vec<u8>) -> Self {
        DerivationTrace { rules }
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeriveError {
    #[error("a bare activity is not derivable from the grammar start symbol")]
    NotAPattern,
}

fn pattern_rules(kind: PatternKind) -> [u8; 3] {
    match kind {
        PatternKind::Seq => [1, 4, 10],
        PatternKind::SeqSeq => [2, 5, 11],
        PatternKind::Alt => [2, 6, 11],
        PatternKind::Cond => [3, 7, 12],
        PatternKind::Para => [3, 8, 12],
        PatternKind::Loop => [3, 9, 12],
    }
}

/// The leftmost derivation of `expr` from the grammar start symbol.
/// Arguments expand depth-first, left to right; a nested pattern argument
/// contributes rule 13 before its own derivation, an activity contributes
/// rule 14 followed by 15.
pub fn derive(expr: &PatternExpr) -> Result<DerivationTrace, DeriveError> {
    fn node(e: &PatternExpr, out: &mut Vec<u8>) {
        let PatternExpr::Node(n) = e else { unreachable!("arguments are filtered by caller") };
        out.extend(pattern_rules(n.kind()));
        for arg in n.args() {
            match arg {
                PatternExpr::Activity(_) => out.extend([14, 15]),
                PatternExpr::Node(_) => {
                    out.push(13);
                    node(arg, out);
                }
            }
        }
    }
    match expr {
        PatternExpr::Activity(_) => Err(DeriveError::NotAPattern),
        PatternExpr::Node(_) => {
            let mut rules = Vec::new();
            node(expr, &mut rules);
            Ok(DerivationTrace { rules })
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("rule {found} at index {index} is not applicable (expected one of {expected:?})")]
    UnexpectedRule { index: usize, found: u8, expected: Vec<u8> },
    #[error("derivation ends before the sentential form is complete")]
    Truncated,
    #[error("derivation continues after the sentential form is complete")]
    TrailingRules,
}

/// Rebuild the tree shape a derivation describes. Activity names are not
/// part of a trace, so leaves come back with placeholder names; the trace
/// of the result equals the input for any valid derivation.
pub fn replay(rules: &[u8]) -> Result<PatternExpr, ReplayError> {
    struct Cursor<'a> {
        rules: &'a [u8],
        pos: usize,
        fresh: u32,
    }
    impl Cursor<'_> {
        fn take(&mut self, expected: &[u8]) -> Result<u8, ReplayError> {
            match self.rules.get(self.pos) {
                None => Err(ReplayError::Truncated),
                Some(&r) if expected.contains(&r) => {
                    self.pos += 1;
                    Ok(r)
                }
                Some(&r) => Err(ReplayError::UnexpectedRule {
                    index: self.pos,
                    found: r,
                    expected: expected.to_vec(),
                }),
            }
        }
    }

    fn pattern(cur: &mut Cursor) -> Result<PatternExpr, ReplayError> {
        let alt = cur.take(&[1, 2, 3])?;
        let kind = match alt {
            1 => {
                cur.take(&[4])?;
                PatternKind::Seq
            }
            2 => match cur.take(&[5, 6])? {
                5 => PatternKind::SeqSeq,
                _ => PatternKind::Alt,
            },
            _ => match cur.take(&[7, 8, 9])? {
                7 => PatternKind::Cond,
                8 => PatternKind::Para,
                _ => PatternKind::Loop,
            },
        };
        cur.take(&[args_rule(kind)])?;
        let mut args = Vec::with_capacity(kind.arity());
        for _ in 0..kind.arity() {
            args.push(arg(cur)?);
        }
        Ok(PatternExpr::pattern(kind, args).expect("arity by construction"))
    }

    fn arg(cur: &mut Cursor) -> Result<PatternExpr, ReplayError> {
        match cur.take(&[13, 14])? {
            13 => pattern(cur),
            _ => {
                cur.take(&[15])?;
                let name = format!("x{}", cur.fresh);
                cur.fresh += 1;
                Ok(PatternExpr::activity(&name))
            }
        }
    }

    let mut cur = Cursor { rules, pos: 0, fresh: 0 };
    let expr = pattern(&mut cur)?;
    if cur.pos != rules.len() {
        return Err(ReplayError::TrailingRules);
    }
    Ok(expr)
}
