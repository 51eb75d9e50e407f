//! Skeleton generation: a pattern expression becomes a compilable program
//! outline whose control flow mirrors the pattern tree, with one empty stub
//! function per activity. Guard activities become boolean stubs returning a
//! constant, so emitted skeletons parse and terminate.
//!
//! `structure_of` parses emitted text back into a normalized control-flow
//! tree so golden comparisons are independent of identifier spelling and
//! layout.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::workflow::{atoms_of, Atom, PatternExpr, PatternKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lang {
    Java,
    Python,
}

impl Lang {
    pub fn extension(self) -> &'static str {
        match self {
            Lang::Java => "java",
            Lang::Python => "py",
        }
    }
}

/// A generated skeleton: the source text plus the stub inventory.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub lang: Lang,
    pub unit_name: String,
    pub source: String,
    /// Stub function names in first-call order, with their guard role.
    pub stubs: Vec<(String, bool)>,
}

/// Normalized control-flow statement, shared by the generator and the
/// structure parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtNode {
    Call(String),
    If { cond: String, then: Vec<StmtNode> },
    IfElse { cond: String, then: Vec<StmtNode>, els: Vec<StmtNode> },
    While { cond: String, body: Vec<StmtNode> },
    Par { first: Vec<StmtNode>, second: Vec<StmtNode> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTree {
    pub body: Vec<StmtNode>,
}

impl StructureTree {
    /// The tree with identifiers erased, for spelling-independent equality.
    pub fn shape(&self) -> StructureTree {
        fn erase(nodes: &[StmtNode]) -> Vec<StmtNode> {
            nodes
                .iter()
                .map(|n| match n {
                    StmtNode::Call(_) => StmtNode::Call(String::new()),
                    StmtNode::If { then, .. } => {
                        StmtNode::If { cond: String::new(), then: erase(then) }
                    }
                    StmtNode::IfElse { then, els, .. } => StmtNode::IfElse {
                        cond: String::new(),
                        then: erase(then),
                        els: erase(els),
                    },
                    StmtNode::While { body, .. } => {
                        StmtNode::While { cond: String::new(), body: erase(body) }
                    }
                    StmtNode::Par { first, second } => {
                        StmtNode::Par { first: erase(first), second: erase(second) }
                    }
                })
                .collect()
        }
        StructureTree { body: erase(&self.body) }
    }
}

/// Deterministic identifier assignment: names that are already valid
/// identifiers are kept, numeric names get an `a` prefix, primes append
/// `_c`, and collisions a numeric suffix.
struct IdentMap {
    assigned: BTreeMap<Atom, String>,
    taken: Vec<String>,
}

impl IdentMap {
    fn new() -> Self {
        IdentMap { assigned: BTreeMap::new(), taken: Vec::new() }
    }

    fn ident(&mut self, atom: &Atom) -> String {
        if let Some(name) = self.assigned.get(atom) {
            return name.clone();
        }
        let mut base = String::new();
        if atom.name().starts_with(|c: char| c.is_ascii_digit()) {
            base.push('a');
        }
        base.push_str(atom.name());
        for _ in 0..atom.primes() {
            base.push_str("_c");
        }
        let mut name = base.clone();
        let mut suffix = 2;
        while self.taken.contains(&name) {
            name = format!("{base}_{suffix}");
            suffix += 1;
        }
        self.taken.push(name.clone());
        self.assigned.insert(atom.clone(), name.clone());
        name
    }
}

struct BuildCtx {
    idents: IdentMap,
    stubs: Vec<(String, bool)>,
    params: BTreeMap<String, Vec<String>>,
}

impl BuildCtx {
    fn record(&mut self, name: &str, guard: bool, params: &[String]) {
        if !params.is_empty() {
            self.params.entry(name.to_string()).or_default().extend_from_slice(params);
        }
        match self.stubs.iter_mut().find(|(n, _)| n == name) {
            Some((_, g)) => *g = *g || guard,
            None => self.stubs.push((name.to_string(), guard)),
        }
    }
}

/// Build the statement tree for an expression. The exit activity of any
/// pattern is structurally the last call emitted, so a compound guard is
/// its leading statements followed by a branch on its exit activity.
fn build(expr: &PatternExpr, ctx: &mut BuildCtx) -> Vec<StmtNode> {
    match expr {
        PatternExpr::Activity(a) => {
            let name = ctx.idents.ident(&a.atom);
            ctx.record(&name, false, &a.params);
            vec![StmtNode::Call(name)]
        }
        PatternExpr::Node(node) => {
            let args = node.args();
            match node.kind() {
                PatternKind::Seq => {
                    let mut out = build(&args[0], ctx);
                    out.extend(build(&args[1], ctx));
                    out
                }
                PatternKind::SeqSeq => {
                    let mut out = build(&args[0], ctx);
                    out.extend(build(&args[1], ctx));
                    out.extend(build(&args[2], ctx));
                    out
                }
                PatternKind::Cond => {
                    let (mut out, cond) = guard(&args[0], ctx);
                    let then = build(&args[1], ctx);
                    let els = build(&args[2], ctx);
                    out.push(StmtNode::IfElse { cond, then, els });
                    out.extend(build(&args[3], ctx));
                    out
                }
                PatternKind::Alt => {
                    let (mut out, cond) = guard(&args[0], ctx);
                    let then = build(&args[1], ctx);
                    out.push(StmtNode::If { cond, then });
                    out.extend(build(&args[2], ctx));
                    out
                }
                PatternKind::Para => {
                    let mut out = build(&args[0], ctx);
                    let first = build(&args[1], ctx);
                    let second = build(&args[2], ctx);
                    out.push(StmtNode::Par { first, second });
                    out.extend(build(&args[3], ctx));
                    out
                }
                PatternKind::Loop => {
                    let mut out = build(&args[0], ctx);
                    let (pre, cond) = guard(&args[1], ctx);
                    out.extend(pre);
                    let body = build(&args[2], ctx);
                    out.push(StmtNode::While { cond, body });
                    out.extend(build(&args[3], ctx));
                    out
                }
            }
        }
    }
}

/// Statements to run before the branch, plus the boolean condition call.
fn guard(expr: &PatternExpr, ctx: &mut BuildCtx) -> (Vec<StmtNode>, String) {
    let mut stmts = build(expr, ctx);
    let Some(StmtNode::Call(cond)) = stmts.pop() else {
        unreachable!("the last statement of any pattern is the exit activity call");
    };
    if let Some((_, g)) = ctx.stubs.iter_mut().find(|(n, _)| n == &cond) {
        *g = true;
    }
    (stmts, cond)
}

/// Generate a skeleton for the expression. `unit_name` names the class
/// (and output file); control-flow nesting is isomorphic to the tree.
pub fn gen_skeleton(expr: &PatternExpr, lang: Lang, unit_name: &str) -> Skeleton {
    let mut ctx = BuildCtx { idents: IdentMap::new(), stubs: Vec::new(), params: BTreeMap::new() };
    let body = build(expr, &mut ctx);
    debug_assert_eq!(ctx.stubs.len(), atoms_of(expr).len());
    let source = match lang {
        Lang::Java => render_java(&body, &ctx, unit_name),
        Lang::Python => render_python(&body, &ctx),
    };
    Skeleton { lang, unit_name: unit_name.to_string(), source, stubs: ctx.stubs }
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

fn render_java(body: &[StmtNode], ctx: &BuildCtx, unit: &str) -> String {
    fn stmts(nodes: &[StmtNode], out: &mut String, level: usize, thread_seq: &mut usize) {
        for node in nodes {
            match node {
                StmtNode::Call(name) => {
                    indent(out, level);
                    writeln!(out, "{name}();").unwrap();
                }
                StmtNode::If { cond, then } => {
                    indent(out, level);
                    writeln!(out, "if ({cond}()) {{").unwrap();
                    stmts(then, out, level + 1, thread_seq);
                    indent(out, level);
                    writeln!(out, "}}").unwrap();
                }
                StmtNode::IfElse { cond, then, els } => {
                    indent(out, level);
                    writeln!(out, "if ({cond}()) {{").unwrap();
                    stmts(then, out, level + 1, thread_seq);
                    indent(out, level);
                    writeln!(out, "}} else {{").unwrap();
                    stmts(els, out, level + 1, thread_seq);
                    indent(out, level);
                    writeln!(out, "}}").unwrap();
                }
                StmtNode::While { cond, body } => {
                    indent(out, level);
                    writeln!(out, "while ({cond}()) {{").unwrap();
                    stmts(body, out, level + 1, thread_seq);
                    indent(out, level);
                    writeln!(out, "}}").unwrap();
                }
                StmtNode::Par { first, second } => {
                    let a = *thread_seq;
                    let b = a + 1;
                    *thread_seq += 2;
                    for (n, branch) in [(a, first), (b, second)] {
                        indent(out, level);
                        writeln!(out, "Thread thread{n} = new Thread(new Runnable() {{").unwrap();
                        indent(out, level + 1);
                        writeln!(out, "@Override public void run() {{").unwrap();
                        stmts(branch, out, level + 2, thread_seq);
                        indent(out, level + 1);
                        writeln!(out, "}}").unwrap();
                        indent(out, level);
                        writeln!(out, "}});").unwrap();
                    }
                    indent(out, level);
                    writeln!(out, "thread{a}.start(); thread{b}.start();").unwrap();
                    indent(out, level);
                    writeln!(out, "thread{a}.join(); thread{b}.join();").unwrap();
                }
            }
        }
    }

    let mut out = String::new();
    writeln!(out, "public class {unit} {{").unwrap();
    indent(&mut out, 1);
    writeln!(out, "public static void main(String[] args) throws InterruptedException {{").unwrap();
    let mut thread_seq = 1;
    stmts(body, &mut out, 2, &mut thread_seq);
    indent(&mut out, 1);
    writeln!(out, "}}").unwrap();
    out.push('\n');
    for (name, is_guard) in &ctx.stubs {
        let comment = stub_comment(ctx, name);
        indent(&mut out, 1);
        if *is_guard {
            writeln!(out, "public static boolean {name}() {{ return false; }} // {comment}").unwrap();
        } else {
            writeln!(out, "public static void {name}() {{ }} // {comment}").unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

fn stub_comment(ctx: &BuildCtx, name: &str) -> String {
    match ctx.params.get(name) {
        Some(params) if !params.is_empty() => {
            format!("Add code here (params: {})", params.join(", "))
        }
        _ => "Add code here".to_string(),
    }
}

fn render_python(body: &[StmtNode], ctx: &BuildCtx) -> String {
    fn stmts(nodes: &[StmtNode], out: &mut String, level: usize, par_seq: &mut usize) {
        if nodes.is_empty() {
            indent(out, level);
            writeln!(out, "pass").unwrap();
            return;
        }
        for node in nodes {
            match node {
                StmtNode::Call(name) => {
                    indent(out, level);
                    writeln!(out, "{name}()").unwrap();
                }
                StmtNode::If { cond, then } => {
                    indent(out, level);
                    writeln!(out, "if {cond}():").unwrap();
                    stmts(then, out, level + 1, par_seq);
                }
                StmtNode::IfElse { cond, then, els } => {
                    indent(out, level);
                    writeln!(out, "if {cond}():").unwrap();
                    stmts(then, out, level + 1, par_seq);
                    indent(out, level);
                    writeln!(out, "else:").unwrap();
                    stmts(els, out, level + 1, par_seq);
                }
                StmtNode::While { cond, body } => {
                    indent(out, level);
                    writeln!(out, "while {cond}():").unwrap();
                    stmts(body, out, level + 1, par_seq);
                }
                StmtNode::Par { first, second } => {
                    let n = *par_seq;
                    *par_seq += 1;
                    indent(out, level);
                    writeln!(out, "def par{n}_a():").unwrap();
                    stmts(first, out, level + 1, par_seq);
                    indent(out, level);
                    writeln!(out, "def par{n}_b():").unwrap();
                    stmts(second, out, level + 1, par_seq);
                    indent(out, level);
                    writeln!(out, "t{n}_a = threading.Thread(target=par{n}_a)").unwrap();
                    indent(out, level);
                    writeln!(out, "t{n}_b = threading.Thread(target=par{n}_b)").unwrap();
                    indent(out, level);
                    writeln!(out, "t{n}_a.start()").unwrap();
                    indent(out, level);
                    writeln!(out, "t{n}_b.start()").unwrap();
                    indent(out, level);
                    writeln!(out, "t{n}_a.join()").unwrap();
                    indent(out, level);
                    writeln!(out, "t{n}_b.join()").unwrap();
                }
            }
        }
    }

    let mut out = String::from("import threading\n\n\ndef main():\n");
    let mut par_seq = 1;
    stmts(body, &mut out, 1, &mut par_seq);
    for (name, is_guard) in &ctx.stubs {
        let comment = stub_comment(ctx, name);
        out.push('\n');
        writeln!(out, "\ndef {name}():").unwrap();
        indent(&mut out, 1);
        if *is_guard {
            writeln!(out, "return False  # {comment}").unwrap();
        } else {
            writeln!(out, "pass  # {comment}").unwrap();
        }
    }
    out.push_str("\n\nif __name__ == \"__main__\":\n    main()\n");
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("structure parse error: {message}")]
pub struct StructureParseError {
    pub message: String,
}

fn sperr<T>(message: impl Into<String>) -> Result<T, StructureParseError> {
    Err(StructureParseError { message: message.into() })
}

/// Parse emitted skeleton text back into its normalized control-flow tree.
pub fn structure_of(source: &str, lang: Lang) -> Result<StructureTree, StructureParseError> {
    match lang {
        Lang::Java => java_structure(source),
        Lang::Python => python_structure(source),
    }
}

// --- Java structure parsing -------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum JTok {
    Ident(String),
    Punct(char),
}

fn java_tokens(source: &str) -> Vec<JTok> {
    let bytes = source.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == '/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            toks.push(JTok::Ident(source[start..i].to_string()));
        } else {
            toks.push(JTok::Punct(c));
            i += 1;
        }
    }
    toks
}

struct JParser {
    toks: Vec<JTok>,
    pos: usize,
}

impl JParser {
    fn peek(&self) -> Option<&JTok> {
        self.toks.get(self.pos)
    }

    fn ident_is(&self, offset: usize, word: &str) -> bool {
        matches!(self.toks.get(self.pos + offset), Some(JTok::Ident(w)) if w == word)
    }

    fn punct_is(&self, offset: usize, c: char) -> bool {
        matches!(self.toks.get(self.pos + offset), Some(JTok::Punct(p)) if *p == c)
    }

    fn take_ident(&mut self) -> Result<String, StructureParseError> {
        match self.toks.get(self.pos) {
            Some(JTok::Ident(w)) => {
                self.pos += 1;
                Ok(w.clone())
            }
            other => sperr(format!("expected identifier, found {other:?}")),
        }
    }

    fn take_punct(&mut self, c: char) -> Result<(), StructureParseError> {
        match self.toks.get(self.pos) {
            Some(JTok::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            other => sperr(format!("expected {c:?}, found {other:?}")),
        }
    }

    /// `name ( ) ;` style call; the condition form omits the semicolon.
    fn take_call(&mut self) -> Result<String, StructureParseError> {
        let name = self.take_ident()?;
        self.take_punct('(')?;
        self.take_punct(')')?;
        Ok(name)
    }

    fn block(&mut self) -> Result<Vec<StmtNode>, StructureParseError> {
        self.take_punct('{')?;
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(JTok::Punct('}')) => {
                    self.pos += 1;
                    return Ok(out);
                }
                None => return sperr("unbalanced braces"),
                _ => out.push(self.stmt()?),
            }
        }
    }

    fn stmt(&mut self) -> Result<StmtNode, StructureParseError> {
        if self.ident_is(0, "if") {
            self.pos += 1;
            self.take_punct('(')?;
            let cond = self.take_call()?;
            self.take_punct(')')?;
            let then = self.block()?;
            if self.ident_is(0, "else") {
                self.pos += 1;
                let els = self.block()?;
                return Ok(StmtNode::IfElse { cond, then, els });
            }
            return Ok(StmtNode::If { cond, then });
        }
        if self.ident_is(0, "while") {
            self.pos += 1;
            self.take_punct('(')?;
            let cond = self.take_call()?;
            self.take_punct(')')?;
            let body = self.block()?;
            return Ok(StmtNode::While { cond, body });
        }
        if self.ident_is(0, "Thread") {
            let (var_a, first) = self.thread_decl()?;
            let (var_b, second) = self.thread_decl()?;
            for (var, method) in
                [(&var_a, "start"), (&var_b, "start"), (&var_a, "join"), (&var_b, "join")]
            {
                let v = self.take_ident()?;
                if &v != var {
                    return sperr(format!("expected {var}.{method}(), found {v}"));
                }
                self.take_punct('.')?;
                let m = self.take_ident()?;
                if m != method {
                    return sperr(format!("expected {var}.{method}(), found .{m}"));
                }
                self.take_punct('(')?;
                self.take_punct(')')?;
                self.take_punct(';')?;
            }
            return Ok(StmtNode::Par { first, second });
        }
        let name = self.take_call()?;
        self.take_punct(';')?;
        Ok(StmtNode::Call(name))
    }

    /// `Thread v = new Thread(new Runnable() { ... run() { BODY } });`
    fn thread_decl(&mut self) -> Result<(String, Vec<StmtNode>), StructureParseError> {
        if !self.ident_is(0, "Thread") {
            return sperr("expected a second thread declaration");
        }
        self.pos += 1;
        let var = self.take_ident()?;
        self.take_punct('=')?;
        // Skip ahead to the run() body.
        while !(self.ident_is(0, "run") && self.punct_is(1, '(')) {
            if self.peek().is_none() {
                return sperr("thread declaration without a run() body");
            }
            self.pos += 1;
        }
        self.pos += 1;
        self.take_punct('(')?;
        self.take_punct(')')?;
        let body = self.block()?;
        self.take_punct('}')?;
        self.take_punct(')')?;
        self.take_punct(';')?;
        Ok((var, body))
    }
}

fn java_structure(source: &str) -> Result<StructureTree, StructureParseError> {
    let toks = java_tokens(source);
    let mut p = JParser { toks, pos: 0 };
    // Find `main (` and the block that follows its parameter list.
    while !(p.ident_is(0, "main") && p.punct_is(1, '(')) {
        if p.peek().is_none() {
            return sperr("no main method found");
        }
        p.pos += 1;
    }
    while !p.punct_is(0, '{') {
        if p.peek().is_none() {
            return sperr("main method has no body");
        }
        p.pos += 1;
    }
    let body = p.block()?;
    Ok(StructureTree { body })
}

// --- Python structure parsing -----------------------------------------------

struct PLine {
    indent: usize,
    text: String,
}

fn python_lines(source: &str) -> Vec<PLine> {
    source
        .lines()
        .filter_map(|raw| {
            let text = raw.trim_end();
            let stripped = text.trim_start();
            if stripped.is_empty() || stripped.starts_with('#') {
                return None;
            }
            let indent = text.len() - stripped.len();
            let code = match stripped.find("  #") {
                Some(i) => stripped[..i].trim_end(),
                None => stripped,
            };
            Some(PLine { indent, text: code.to_string() })
        })
        .collect()
}

struct PParser {
    lines: Vec<PLine>,
    pos: usize,
}

impl PParser {
    fn block(&mut self, indent: usize) -> Result<Vec<StmtNode>, StructureParseError> {
        let mut out = Vec::new();
        while let Some(line) = self.lines.get(self.pos) {
            if line.indent < indent {
                break;
            }
            if line.indent > indent {
                return sperr(format!("unexpected indentation at {:?}", line.text));
            }
            let text = line.text.clone();
            if text == "pass" {
                self.pos += 1;
                continue;
            }
            if let Some(cond) = text.strip_prefix("if ").and_then(|t| t.strip_suffix("():")) {
                self.pos += 1;
                let then = self.block(indent + 4)?;
                if self
                    .lines
                    .get(self.pos)
                    .is_some_and(|l| l.indent == indent && l.text == "else:")
                {
                    self.pos += 1;
                    let els = self.block(indent + 4)?;
                    out.push(StmtNode::IfElse { cond: cond.to_string(), then, els });
                } else {
                    out.push(StmtNode::If { cond: cond.to_string(), then });
                }
                continue;
            }
            if let Some(cond) = text.strip_prefix("while ").and_then(|t| t.strip_suffix("():")) {
                self.pos += 1;
                let body = self.block(indent + 4)?;
                out.push(StmtNode::While { cond: cond.to_string(), body });
                continue;
            }
            if text.starts_with("def ") {
                let first = self.branch_def(indent)?;
                let second = self.branch_def(indent)?;
                for _ in 0..6 {
                    let Some(line) = self.lines.get(self.pos) else {
                        return sperr("incomplete thread wiring after branch definitions");
                    };
                    let ok = line.indent == indent
                        && (line.text.contains("threading.Thread(target=")
                            || line.text.ends_with(".start()")
                            || line.text.ends_with(".join()"));
                    if !ok {
                        return sperr(format!("unexpected thread wiring line {:?}", line.text));
                    }
                    self.pos += 1;
                }
                out.push(StmtNode::Par { first, second });
                continue;
            }
            if let Some(name) = text.strip_suffix("()") {
                if name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !name.is_empty() {
                    self.pos += 1;
                    out.push(StmtNode::Call(name.to_string()));
                    continue;
                }
            }
            return sperr(format!("unrecognized statement {text:?}"));
        }
        Ok(out)
    }

    fn branch_def(&mut self, indent: usize) -> Result<Vec<StmtNode>, StructureParseError> {
        let Some(line) = self.lines.get(self.pos) else {
            return sperr("expected a parallel branch definition");
        };
        if line.indent != indent || !line.text.starts_with("def ") || !line.text.ends_with("():") {
            return sperr(format!("expected a parallel branch definition, found {:?}", line.text));
        }
        self.pos += 1;
        self.block(indent + 4)
    }
}

fn python_structure(source: &str) -> Result<StructureTree, StructureParseError> {
    let lines = python_lines(source);
    let Some(start) = lines.iter().position(|l| l.indent == 0 && l.text == "def main():") else {
        return sperr("no main function found");
    };
    let mut p = PParser { lines, pos: start + 1 };
    let body = p.block(4)?;
    Ok(StructureTree { body })
}

/// The control-flow tree an expression is expected to produce, built
/// directly from the pattern tree. Test oracle for structural isomorphism.
pub fn expected_structure(expr: &PatternExpr) -> StructureTree {
    let mut ctx = BuildCtx { idents: IdentMap::new(), stubs: Vec::new(), params: BTreeMap::new() };
    StructureTree { body: build(expr, &mut ctx) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_text::parse_expr;

    fn tree(expr: &str, lang: Lang) -> StructureTree {
        let e = parse_expr(expr).unwrap();
        let sk = gen_skeleton(&e, lang, "Unit");
        structure_of(&sk.source, lang).unwrap()
    }

    #[test]
    fn seq_is_two_calls() {
        for lang in [Lang::Java, Lang::Python] {
            let t = tree("Seq(a,b)", lang);
            assert_eq!(
                t.body,
                vec![StmtNode::Call("a".into()), StmtNode::Call("b".into())],
                "{lang:?}"
            );
        }
    }

    #[test]
    fn cond_maps_to_if_else_then_join() {
        let t = tree("Cond(c,t,e,j)", Lang::Java);
        assert_eq!(
            t.body,
            vec![
                StmtNode::IfElse {
                    cond: "c".into(),
                    then: vec![StmtNode::Call("t".into())],
                    els: vec![StmtNode::Call("e".into())],
                },
                StmtNode::Call("j".into()),
            ]
        );
    }

    #[test]
    fn loop_maps_to_stmt_while_stmt() {
        for lang in [Lang::Java, Lang::Python] {
            let t = tree("Loop(a,b,c,d)", lang);
            assert_eq!(
                t.body,
                vec![
                    StmtNode::Call("a".into()),
                    StmtNode::While { cond: "b".into(), body: vec![StmtNode::Call("c".into())] },
                    StmtNode::Call("d".into()),
                ],
                "{lang:?}"
            );
        }
    }

    #[test]
    fn para_maps_to_par_block() {
        for lang in [Lang::Java, Lang::Python] {
            let t = tree("Para(a,b,Seq(c,d),e)", lang);
            assert_eq!(
                t.body,
                vec![
                    StmtNode::Call("a".into()),
                    StmtNode::Par {
                        first: vec![StmtNode::Call("b".into())],
                        second: vec![StmtNode::Call("c".into()), StmtNode::Call("d".into())],
                    },
                    StmtNode::Call("e".into()),
                ],
                "{lang:?}"
            );
        }
    }

    #[test]
    fn compound_guard_runs_prefix_then_branches_on_exit() {
        let t = tree("Cond(Seq(g,h),t,e,j)", Lang::Java);
        assert_eq!(
            t.body,
            vec![
                StmtNode::Call("g".into()),
                StmtNode::IfElse {
                    cond: "h".into(),
                    then: vec![StmtNode::Call("t".into())],
                    els: vec![StmtNode::Call("e".into())],
                },
                StmtNode::Call("j".into()),
            ]
        );
    }

    #[test]
    fn stub_inventory_matches_atoms() {
        let e = parse_expr("Loop(1,2,Seq(3,3'),4)").unwrap();
        let sk = gen_skeleton(&e, Lang::Java, "Unit");
        let names: Vec<&str> = sk.stubs.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["a1", "a2", "a3", "a3_c", "a4"]);
        let guard = sk.stubs.iter().find(|(n, _)| n == "a2").unwrap();
        assert!(guard.1, "loop guard is boolean");
        assert!(sk.source.contains("public static boolean a2() { return false; }"));
    }

    #[test]
    fn emitted_java_balances_braces_and_parens() {
        let e = parse_expr("Cond(a,Para(b,c,d,e),Loop(f,g,h,i),j)").unwrap();
        let sk = gen_skeleton(&e, Lang::Java, "Unit");
        let opens = sk.source.matches('{').count();
        let closes = sk.source.matches('}').count();
        assert_eq!(opens, closes);
        assert_eq!(sk.source.matches('(').count(), sk.source.matches(')').count());
    }

    #[test]
    fn nested_para_gets_fresh_thread_names() {
        let e = parse_expr("Para(a,Para(b,c,d,e),f,g)").unwrap();
        let sk = gen_skeleton(&e, Lang::Java, "Unit");
        assert!(sk.source.contains("thread1"));
        assert!(sk.source.contains("thread3"));
        let t = structure_of(&sk.source, Lang::Java).unwrap();
        assert_eq!(t.shape(), expected_structure(&e).shape());
    }

    #[test]
    fn structure_parse_rejects_garbage() {
        assert!(structure_of("not a skeleton", Lang::Java).is_err());
        assert!(structure_of("def other():\n    pass\n", Lang::Python).is_err());
    }

    #[test]
    fn params_surface_in_stub_comments() {
        use crate::workflow::{Activity, Atom, PatternExpr};
        let pay = PatternExpr::Activity(Activity {
            atom: Atom::new("Pay").unwrap(),
            params: vec!["amount".into()],
        });
        let e = PatternExpr::seq(pay, PatternExpr::activity("Done"));
        let sk = gen_skeleton(&e, Lang::Java, "Unit");
        assert!(sk.source.contains("// Add code here (params: amount)"), "{}", sk.source);
        let py = gen_skeleton(&e, Lang::Python, "Unit");
        assert!(py.source.contains("# Add code here (params: amount)"), "{}", py.source);
    }
}
