//! The scenario front-end: the two fixed extraction prompts, the tag
//! markup parser for annotated scenarios, activity vocabulary extraction,
//! and the mapping from structural tags to a draft pattern structure with
//! diagnostics for the analyst to resolve.

use std::fmt::Write as _;

use thiserror::Error;

use crate::workflow::{Activity, Atom, PatternExpr, PatternKind, Vocabulary, VocabEntry};

/// Static part of the activity/parameter extraction prompt.
pub const ACTIVITIES_PROMPT: &str = "\
For the given use case scenario in natural language,
please apply the following tags:
- <A>...</A> to denote primary activities, where
     the entire verb-noun phrase represents
     a single activity.
- <P>...</P> to denote activity parameters
    (input data, attributes, or values necessary
    for performing the activity, if applicable).
Tag short semantically related phrases rather than
entire sentences. Each primary activity should
include both the verb and its object as a single
unit within <A>...</A>. Tags should not
encompass actors. Example:
The user <A>selects a product</A> and provides
the <P>product name</P> and <P>quantity</P>.
The system <A>initiates the payment process</A>
for the <P>product name</P> and <P>quantity</P>.";

/// Static part of the control-flow structure extraction prompt.
pub const STRUCTURES_PROMPT: &str = "\
For the given use case scenario written in natural
language, identify and mark control flow structures
using the following tags:
- <SEQ>...</SEQ> for sequences of activities (steps
      performed in a specific order), it may contain
      one or two activities.
- <COND>...</COND> for conditional activities (steps
      executed based on a condition).
- <ALT>...</ALT> for conditional activities without
      an 'else' branch.
- <PARA>...</PARA> for parallel activities
     (operations performed simultaneously).
- <LOOP>...</LOOP> for loops (repeated activities).
Structural tags should enclose activities previously
marked with <A>...</A>. Nested structures are allowed
and welcome-apply them logically. Do not tag
actors-only activities! Example:
The user <SEQ> <A>enters data</A>. The system
<A>verifies the data</A> and <A>stores it in
the database</A> </SEQ>. <COND> If <A>the data is
incorrect</A>, the system <A>sends a notification</A>
and <A>rejects the order</A> </COND>.
<ALT> If <A>the data is valid</A>, the system
<A>completes the order</A> </ALT>.
If <A>there are more records</A>, <LOOP> the system
<A>processes the next record</A> </LOOP>. Meanwhile,
<PARA> <A>the change history is updated</A> and
<A>events are logged</A> </PARA>.";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PromptStage {
    Activities,
    Structures,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("scenario text is empty")]
    EmptyScenario,
    #[error("structure extraction requires an activity-tagged scenario: {0}")]
    UntaggedInput(String),
}

/// The prompt for one extraction stage: the fixed static part followed by
/// the scenario as the dynamic part. The structures stage insists on input
/// that already carries activity tags.
pub fn build_prompt(stage: PromptStage, scenario: &str) -> Result<String, ScenarioError> {
    if scenario.trim().is_empty() {
        return Err(ScenarioError::EmptyScenario);
    }
    if stage == PromptStage::Structures {
        let parsed = parse_tags(scenario)
            .map_err(|e| ScenarioError::UntaggedInput(e.to_string()))?;
        if count_tags(&parsed.nodes, TagKind::A) == 0 {
            return Err(ScenarioError::UntaggedInput("no <A> tags present".to_string()));
        }
    }
    let static_part = match stage {
        PromptStage::Activities => ACTIVITIES_PROMPT,
        PromptStage::Structures => STRUCTURES_PROMPT,
    };
    Ok(format!("{static_part}\n\n{scenario}"))
}

/// The closed tag inventory of the two extraction stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagKind {
    A,
    P,
    Seq,
    Cond,
    Alt,
    Para,
    Loop,
}

impl TagKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TagKind::A => "A",
            TagKind::P => "P",
            TagKind::Seq => "SEQ",
            TagKind::Cond => "COND",
            TagKind::Alt => "ALT",
            TagKind::Para => "PARA",
            TagKind::Loop => "LOOP",
        }
    }

    fn parse(name: &str) -> Option<Self> {
        match name {
            "A" => Some(TagKind::A),
            "P" => Some(TagKind::P),
            "SEQ" => Some(TagKind::Seq),
            "COND" => Some(TagKind::Cond),
            "ALT" => Some(TagKind::Alt),
            "PARA" => Some(TagKind::Para),
            "LOOP" => Some(TagKind::Loop),
            _ => None,
        }
    }

    pub fn is_structural(self) -> bool {
        !matches!(self, TagKind::A | TagKind::P)
    }

    /// The pattern a structural tag drafts into.
    pub fn pattern(self) -> Option<PatternKind> {
        match self {
            TagKind::Seq => Some(PatternKind::Seq),
            TagKind::Cond => Some(PatternKind::Cond),
            TagKind::Alt => Some(PatternKind::Alt),
            TagKind::Para => Some(PatternKind::Para),
            TagKind::Loop => Some(PatternKind::Loop),
            TagKind::A | TagKind::P => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TagNode {
    Text(String),
    Tag { kind: TagKind, children: Vec<TagNode> },
}

/// A validated tag tree: tags balance and nest, activity and parameter
/// tags hold text only, and every structural tag encloses at least one
/// activity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedScenario {
    pub nodes: Vec<TagNode>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("tag error at byte {position}: {message}")]
pub struct TagError {
    pub position: usize,
    pub message: String,
}

fn tag_err<T>(position: usize, message: impl Into<String>) -> Result<T, TagError> {
    Err(TagError { position, message: message.into() })
}

/// Try to read `<NAME>` or `</NAME>` at byte `i`; returns
/// (closing?, name, bytes consumed).
fn read_tag(text: &str, i: usize) -> Option<(bool, &str, usize)> {
    let bytes = text.as_bytes();
    debug_assert_eq!(bytes[i], b'<');
    let mut j = i + 1;
    let closing = bytes.get(j) == Some(&b'/');
    if closing {
        j += 1;
    }
    let name_start = j;
    while j < bytes.len() && (bytes[j] as char).is_ascii_alphabetic() {
        j += 1;
    }
    if j == name_start || bytes.get(j) != Some(&b'>') {
        return None;
    }
    Some((closing, &text[name_start..j], j + 1 - i))
}

pub fn parse_tags(text: &str) -> Result<TaggedScenario, TagError> {
    let bytes = text.as_bytes();
    let mut stack: Vec<(usize, TagKind, Vec<TagNode>)> = Vec::new();
    let mut current: Vec<TagNode> = Vec::new();
    let mut buf = String::new();
    let mut i = 0;

    let flush = |buf: &mut String, nodes: &mut Vec<TagNode>| {
        if !buf.is_empty() {
            nodes.push(TagNode::Text(std::mem::take(buf)));
        }
    };

    while i < bytes.len() {
        if bytes[i] == b'<' {
            if let Some((closing, name, consumed)) = read_tag(text, i) {
                let Some(kind) = TagKind::parse(name) else {
                    return tag_err(i, format!("unknown tag <{name}>"));
                };
                if closing {
                    flush(&mut buf, &mut current);
                    let Some((_, open_kind, parent)) = stack.pop() else {
                        return tag_err(i, format!("</{}> without an opening tag", kind.as_str()));
                    };
                    if open_kind != kind {
                        return tag_err(
                            i,
                            format!(
                                "mismatched close: <{}> closed by </{}>",
                                open_kind.as_str(),
                                kind.as_str()
                            ),
                        );
                    }
                    let node = TagNode::Tag { kind, children: current };
                    current = parent;
                    current.push(node);
                } else {
                    flush(&mut buf, &mut current);
                    stack.push((i, kind, std::mem::take(&mut current)));
                }
                i += consumed;
                continue;
            }
        }
        buf.push(bytes[i] as char);
        i += 1;
    }
    if let Some((pos, kind, _)) = stack.last() {
        return tag_err(*pos, format!("<{}> is never closed", kind.as_str()));
    }
    flush(&mut buf, &mut current);

    let scenario = TaggedScenario { nodes: current };
    validate(&scenario.nodes, text.len())?;
    Ok(scenario)
}

fn validate(nodes: &[TagNode], end: usize) -> Result<(), TagError> {
    for node in nodes {
        if let TagNode::Tag { kind, children } = node {
            match kind {
                TagKind::A | TagKind::P => {
                    if children.iter().any(|c| matches!(c, TagNode::Tag { .. })) {
                        return tag_err(
                            end,
                            format!("<{}> may contain text only", kind.as_str()),
                        );
                    }
                }
                _ => {
                    if count_tags(children, TagKind::A) == 0 {
                        return tag_err(
                            end,
                            format!("<{}> must enclose at least one <A> activity", kind.as_str()),
                        );
                    }
                    validate(children, end)?;
                }
            }
        }
    }
    Ok(())
}

fn count_tags(nodes: &[TagNode], want: TagKind) -> usize {
    nodes
        .iter()
        .map(|n| match n {
            TagNode::Text(_) => 0,
            TagNode::Tag { kind, children } => {
                usize::from(*kind == want) + count_tags(children, want)
            }
        })
        .sum()
}

/// Serialize a tag tree back to markup text.
pub fn render(scenario: &TaggedScenario) -> String {
    fn go(nodes: &[TagNode], out: &mut String) {
        for node in nodes {
            match node {
                TagNode::Text(t) => out.push_str(t),
                TagNode::Tag { kind, children } => {
                    write!(out, "<{}>", kind.as_str()).unwrap();
                    go(children, out);
                    write!(out, "</{}>", kind.as_str()).unwrap();
                }
            }
        }
    }
    let mut out = String::new();
    go(&scenario.nodes, &mut out);
    out
}

fn inner_text(children: &[TagNode]) -> String {
    let mut s = String::new();
    for c in children {
        if let TagNode::Text(t) = c {
            s.push_str(t);
        }
    }
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Normalized identifier for a phrase: every alphanumeric word
/// capitalized and concatenated.
pub fn normalize_identifier(phrase: &str) -> String {
    let mut out = String::new();
    for word in phrase.split(|c: char| !c.is_ascii_alphanumeric()) {
        if word.is_empty() {
            continue;
        }
        let mut chars = word.chars();
        let first = chars.next().unwrap();
        out.push(first.to_ascii_uppercase());
        out.extend(chars);
    }
    if out.is_empty() {
        out.push_str("Unnamed");
    }
    if out.chars().next().unwrap().is_ascii_digit() {
        out.insert(0, 'A');
    }
    out
}

/// One vocabulary entry per distinct activity phrase, parameters attached
/// to the nearest preceding activity, identifier collisions between
/// distinct phrases resolved with a numeric suffix.
pub fn extract_vocabulary(scenario: &TaggedScenario) -> Vocabulary {
    struct Walker {
        entries: Vec<VocabEntry>,
        orphans: Vec<String>,
        last: Option<usize>,
    }
    impl Walker {
        fn visit(&mut self, nodes: &[TagNode]) {
            for node in nodes {
                let TagNode::Tag { kind, children } = node else { continue };
                match kind {
                    TagKind::A => {
                        let phrase = inner_text(children);
                        if let Some(i) = self.entries.iter().position(|e| e.phrase == phrase) {
                            self.entries[i].occurrences += 1;
                            self.last = Some(i);
                        } else {
                            let base = normalize_identifier(&phrase);
                            let mut name = base.clone();
                            let mut suffix = 2;
                            while self.entries.iter().any(|e| e.name == name) {
                                name = format!("{base}{suffix}");
                                suffix += 1;
                            }
                            self.entries.push(VocabEntry {
                                name,
                                phrase,
                                params: Vec::new(),
                                occurrences: 1,
                            });
                            self.last = Some(self.entries.len() - 1);
                        }
                    }
                    TagKind::P => {
                        let param = inner_text(children);
                        match self.last {
                            Some(i) => {
                                if !self.entries[i].params.contains(&param) {
                                    self.entries[i].params.push(param);
                                }
                            }
                            None => self.orphans.push(param),
                        }
                    }
                    _ => self.visit(children),
                }
            }
        }
    }
    let mut w = Walker { entries: Vec::new(), orphans: Vec::new(), last: None };
    w.visit(&scenario.nodes);
    Vocabulary { entries: w.entries, index: Default::default(), orphan_params: w.orphans }
}

/// A draft structural node: a pattern candidate with its argument slots
/// assigned left to right; unmet slots are holes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DraftNode {
    Activity { name: String, phrase: String },
    Structure { kind: TagKind, pattern: PatternKind, slots: Vec<Option<DraftNode>>, extras: Vec<DraftNode> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

/// A draft pattern structure over activity leaves. Holes mark argument
/// slots the scenario did not determine; every hole carries a diagnostic,
/// and completion requires explicit analyst input.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DraftStructure {
    pub roots: Vec<DraftNode>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Slot descriptions per pattern, used in hole diagnostics.
fn slot_description(pattern: PatternKind, slot: usize) -> &'static str {
    match (pattern, slot) {
        (PatternKind::Seq, 0) => "a1 (first activity)",
        (PatternKind::Seq, 1) => "a2 (second activity)",
        (PatternKind::SeqSeq, 0) => "a1 (first activity)",
        (PatternKind::SeqSeq, 1) => "a2 (second activity)",
        (PatternKind::SeqSeq, 2) => "a3 (third activity)",
        (PatternKind::Cond, 0) => "a1 (guard)",
        (PatternKind::Cond, 1) => "a2 (then branch)",
        (PatternKind::Cond, 2) => "a3 (else branch)",
        (PatternKind::Cond, 3) => "a4 (join activity)",
        (PatternKind::Alt, 0) => "a1 (guard)",
        (PatternKind::Alt, 1) => "a2 (body)",
        (PatternKind::Alt, 2) => "a3 (continuation)",
        (PatternKind::Para, 0) => "a1 (entry activity before the fork)",
        (PatternKind::Para, 1) => "a2 (first branch)",
        (PatternKind::Para, 2) => "a3 (second branch)",
        (PatternKind::Para, 3) => "a4 (join/exit activity)",
        (PatternKind::Loop, 0) => "a1 (entry activity)",
        (PatternKind::Loop, 1) => "a2 (loop guard)",
        (PatternKind::Loop, 2) => "a3 (loop body)",
        (PatternKind::Loop, 3) => "a4 (exit activity)",
        _ => unreachable!("slot within arity"),
    }
}

/// Which slots the tag's children fill, given how many children there are.
/// SEQ drafts Seq for two children and SeqSeq for three; PARA children are
/// the parallel branches (fork/join come from outside the tag); LOOP
/// children grow from the body outwards.
fn slot_assignment(kind: TagKind, n: usize) -> (PatternKind, Vec<usize>) {
    match kind {
        TagKind::Seq => {
            if n >= 3 {
                (PatternKind::SeqSeq, vec![0, 1, 2])
            } else {
                (PatternKind::Seq, vec![0, 1])
            }
        }
        TagKind::Cond => (PatternKind::Cond, vec![0, 1, 2, 3]),
        TagKind::Alt => (PatternKind::Alt, vec![0, 1, 2]),
        TagKind::Para => match n {
            0..=2 => (PatternKind::Para, vec![1, 2]),
            3 => (PatternKind::Para, vec![1, 2, 3]),
            _ => (PatternKind::Para, vec![0, 1, 2, 3]),
        },
        TagKind::Loop => match n {
            0 | 1 => (PatternKind::Loop, vec![2]),
            2 => (PatternKind::Loop, vec![1, 2]),
            3 => (PatternKind::Loop, vec![1, 2, 3]),
            _ => (PatternKind::Loop, vec![0, 1, 2, 3]),
        },
        TagKind::A | TagKind::P => unreachable!("not structural"),
    }
}

/// Map the structural tags of a scenario to a draft pattern structure.
/// Assignment is deterministic and left to right; every unmet arity
/// becomes a hole with a diagnostic, never an error.
pub fn map_structure(scenario: &TaggedScenario) -> DraftStructure {
    fn build(
        node: &TagNode,
        path: String,
        diagnostics: &mut Vec<Diagnostic>,
    ) -> Option<DraftNode> {
        match node {
            TagNode::Text(_) => None,
            TagNode::Tag { kind: TagKind::P, .. } => None,
            TagNode::Tag { kind: TagKind::A, children } => {
                let phrase = inner_text(children);
                Some(DraftNode::Activity { name: normalize_identifier(&phrase), phrase })
            }
            TagNode::Tag { kind, children } => {
                let kids: Vec<DraftNode> = children
                    .iter()
                    .enumerate()
                    .filter_map(|(i, c)| build(c, format!("{path}.{i}"), diagnostics))
                    .collect();
                let n = kids.len();
                let (pattern, assignment) = slot_assignment(*kind, n);
                let mut slots: Vec<Option<DraftNode>> = vec![None; pattern.arity()];
                let mut extras = Vec::new();
                for (i, kid) in kids.into_iter().enumerate() {
                    match assignment.get(i) {
                        Some(&slot) => slots[slot] = Some(kid),
                        None => extras.push(kid),
                    }
                }
                if !extras.is_empty() {
                    diagnostics.push(Diagnostic {
                        path: path.clone(),
                        message: format!(
                            "<{}> holds {} elements; {} beyond the {} slots kept aside for manual placement",
                            kind.as_str(),
                            n,
                            extras.len(),
                            pattern.arity()
                        ),
                    });
                }
                for (slot, value) in slots.iter().enumerate() {
                    if value.is_none() {
                        diagnostics.push(Diagnostic {
                            path: format!("{path}.{}", slot_name(slot)),
                            message: format!(
                                "{} slot {} unfilled",
                                pattern.keyword(),
                                slot_description(pattern, slot)
                            ),
                        });
                    }
                }
                Some(DraftNode::Structure { kind: *kind, pattern, slots, extras })
            }
        }
    }

    let mut diagnostics = Vec::new();
    let mut roots = Vec::new();
    for (i, node) in scenario.nodes.iter().enumerate() {
        if let Some(n) = build(node, i.to_string(), &mut diagnostics) {
            roots.push(n);
        }
    }
    DraftStructure { roots, diagnostics }
}

pub fn slot_name(slot: usize) -> String {
    format!("a{}", slot + 1)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompletionError {
    #[error("draft still has a hole at {0}; fill it in the edits file")]
    UnfilledHole(String),
    #[error("draft has {0} roots; compose them into one structure first")]
    MultipleRoots(usize),
    #[error("no structural node to complete")]
    NoStructure,
    #[error("edit path {0:?} does not name a hole")]
    BadEditPath(String),
    #[error("edit value {0:?} is not a valid activity name: {1}")]
    BadEditValue(String, String),
}

/// Hole-filling edits: `path = activity` lines, where the path is the one
/// reported in the hole's diagnostic (e.g. `0.a4` or `1.a2.a1`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditFile {
    pub fills: Vec<(String, String)>,
}

impl EditFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut fills = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (path, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: edits are 'path = activity'", lineno + 1))?;
            fills.push((path.trim().to_string(), value.trim().to_string()));
        }
        Ok(EditFile { fills })
    }
}

impl DraftStructure {
    /// Apply hole fills, then convert the single root to a pattern
    /// expression. A draft with remaining holes never converts.
    pub fn complete(&self, edits: &EditFile) -> Result<PatternExpr, CompletionError> {
        let mut draft = self.clone();
        for (path, value) in &edits.fills {
            Atom::new(value)
                .map_err(|e| CompletionError::BadEditValue(value.clone(), e.to_string()))?;
            let leaf = DraftNode::Activity { name: value.clone(), phrase: value.clone() };
            if !fill(&mut draft.roots, path, leaf) {
                return Err(CompletionError::BadEditPath(path.clone()));
            }
        }
        if draft.roots.is_empty() {
            return Err(CompletionError::NoStructure);
        }
        if draft.roots.len() > 1 {
            return Err(CompletionError::MultipleRoots(draft.roots.len()));
        }
        to_expr(&draft.roots[0], "0")
    }
}

fn fill(roots: &mut [DraftNode], path: &str, leaf: DraftNode) -> bool {
    let mut parts = path.split('.');
    let Some(first) = parts.next().and_then(|p| p.parse::<usize>().ok()) else {
        return false;
    };
    let Some(mut node) = roots.get_mut(first) else { return false };
    let segments: Vec<&str> = parts.collect();
    for (i, seg) in segments.iter().enumerate() {
        let DraftNode::Structure { slots, .. } = node else { return false };
        let slot = match seg.strip_prefix('a').and_then(|s| s.parse::<usize>().ok()) {
            Some(n) if n >= 1 && n <= slots.len() => n - 1,
            _ => return false,
        };
        if i == segments.len() - 1 {
            if slots[slot].is_some() {
                return false;
            }
            slots[slot] = Some(leaf);
            return true;
        }
        match slots[slot].as_mut() {
            Some(inner) => node = inner,
            None => return false,
        }
    }
    false
}

fn to_expr(node: &DraftNode, path: &str) -> Result<PatternExpr, CompletionError> {
    match node {
        DraftNode::Activity { name, .. } => {
            let atom = Atom::new(name)
                .map_err(|e| CompletionError::BadEditValue(name.clone(), e.to_string()))?;
            Ok(PatternExpr::Activity(Activity::new(atom)))
        }
        DraftNode::Structure { pattern, slots, extras, .. } => {
            if !extras.is_empty() {
                return Err(CompletionError::UnfilledHole(format!("{path} (extras present)")));
            }
            let mut args = Vec::with_capacity(slots.len());
            for (i, slot) in slots.iter().enumerate() {
                match slot {
                    Some(inner) => args.push(to_expr(inner, &format!("{path}.{}", slot_name(i)))?),
                    None => {
                        return Err(CompletionError::UnfilledHole(format!(
                            "{path}.{}",
                            slot_name(i)
                        )))
                    }
                }
            }
            Ok(PatternExpr::pattern(*pattern, args).expect("slots match arity"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LISTING1_EXAMPLE: &str = "The user <A>selects a product</A> and provides \
the <P>product name</P> and <P>quantity</P>. \
The system <A>initiates the payment process</A> \
for the <P>product name</P> and <P>quantity</P>.";

    #[test]
    fn parses_activities_and_parameters() {
        let s = parse_tags(LISTING1_EXAMPLE).unwrap();
        assert_eq!(count_tags(&s.nodes, TagKind::A), 2);
        assert_eq!(count_tags(&s.nodes, TagKind::P), 4);
    }

    #[test]
    fn vocabulary_matches_the_example_sentence() {
        let s = parse_tags(LISTING1_EXAMPLE).unwrap();
        let v = extract_vocabulary(&s);
        assert_eq!(v.entries.len(), 2);
        assert_eq!(v.entries[0].name, "SelectsAProduct");
        assert_eq!(v.entries[0].params, vec!["product name", "quantity"]);
        assert_eq!(v.entries[1].name, "InitiatesThePaymentProcess");
        assert_eq!(v.entries[1].params, vec!["product name", "quantity"]);
        assert!(v.orphan_params.is_empty());
    }

    #[test]
    fn seq_over_two_activities() {
        let s = parse_tags("<SEQ><A>enters data</A><A>verifies the data</A></SEQ>").unwrap();
        let draft = map_structure(&s);
        assert_eq!(draft.roots.len(), 1);
        let DraftNode::Structure { pattern, slots, .. } = &draft.roots[0] else {
            panic!("expected structure")
        };
        assert_eq!(*pattern, PatternKind::Seq);
        assert!(slots.iter().all(Option::is_some));
        assert!(draft.diagnostics.is_empty());
    }

    #[test]
    fn mismatched_close_is_rejected() {
        let err = parse_tags("<A>x</P>").unwrap_err();
        assert!(err.message.contains("mismatched close"), "{}", err.message);
    }

    #[test]
    fn unknown_tag_is_rejected() {
        assert!(parse_tags("<B>x</B>").is_err());
    }

    #[test]
    fn unclosed_tag_is_rejected() {
        let err = parse_tags("<SEQ><A>x</A>").unwrap_err();
        assert!(err.message.contains("never closed"), "{}", err.message);
    }

    #[test]
    fn structural_tag_needs_an_activity() {
        let err = parse_tags("<SEQ>just words</SEQ>").unwrap_err();
        assert!(err.message.contains("at least one <A>"), "{}", err.message);
    }

    #[test]
    fn a_tag_must_hold_text_only() {
        assert!(parse_tags("<A><SEQ><A>x</A></SEQ></A>").is_err());
    }

    #[test]
    fn stray_angle_bracket_is_text() {
        let s = parse_tags("a < b and <A>does things</A>").unwrap();
        assert_eq!(count_tags(&s.nodes, TagKind::A), 1);
    }

    #[test]
    fn seq_with_one_activity_gets_a_hole() {
        let s = parse_tags("<SEQ><A>a</A></SEQ>").unwrap();
        let draft = map_structure(&s);
        assert_eq!(draft.diagnostics.len(), 1);
        assert!(draft.diagnostics[0].message.contains("Seq slot a2"), "{:?}", draft.diagnostics);
    }

    #[test]
    fn para_with_two_activities_fills_the_branches() {
        let s = parse_tags("<PARA><A>a</A><A>b</A></PARA>").unwrap();
        let draft = map_structure(&s);
        let DraftNode::Structure { slots, .. } = &draft.roots[0] else { panic!() };
        assert!(slots[0].is_none() && slots[3].is_none());
        assert!(slots[1].is_some() && slots[2].is_some());
        assert_eq!(draft.diagnostics.len(), 2);
    }

    #[test]
    fn duplicate_phrases_merge_and_collisions_get_suffixes() {
        let s = parse_tags("<A>pays</A> then <A>pays</A> and <A>pays!</A>").unwrap();
        let v = extract_vocabulary(&s);
        assert_eq!(v.entries.len(), 2);
        assert_eq!(v.entries[0].occurrences, 2);
        assert_eq!(v.entries[0].name, "Pays");
        assert_eq!(v.entries[1].name, "Pays2");
    }

    #[test]
    fn empty_scenario_has_empty_vocabulary() {
        let s = parse_tags("no tags at all").unwrap();
        assert!(extract_vocabulary(&s).entries.is_empty());
    }

    #[test]
    fn render_round_trips() {
        let text = "<SEQ><A>a</A> mid <A>b</A></SEQ> tail";
        let s = parse_tags(text).unwrap();
        assert_eq!(render(&s), text);
        assert_eq!(parse_tags(&render(&s)).unwrap(), s);
    }

    #[test]
    fn prompts_carry_the_scenario_as_dynamic_part() {
        let p = build_prompt(PromptStage::Activities, "The user pays.").unwrap();
        assert!(p.starts_with(ACTIVITIES_PROMPT));
        assert!(p.ends_with("\n\nThe user pays."));
        assert_eq!(build_prompt(PromptStage::Activities, "  "), Err(ScenarioError::EmptyScenario));
        assert!(matches!(
            build_prompt(PromptStage::Structures, "untagged text"),
            Err(ScenarioError::UntaggedInput(_))
        ));
        assert!(build_prompt(PromptStage::Structures, "<A>tagged</A> text").is_ok());
    }

    #[test]
    fn completion_fills_holes_and_rejects_leftovers() {
        let s = parse_tags("<SEQ><A>a</A></SEQ>").unwrap();
        let draft = map_structure(&s);
        assert!(matches!(
            draft.complete(&EditFile::default()),
            Err(CompletionError::UnfilledHole(_))
        ));
        let edits = EditFile::parse("0.a2 = B\n").unwrap();
        let expr = draft.complete(&edits).unwrap();
        assert_eq!(crate::expr_text::print_expr(&expr), "Seq(A,B)");
    }
}
