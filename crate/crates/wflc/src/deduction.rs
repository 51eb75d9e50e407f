//! Bounded satisfiability and entailment checking of generated
//! specifications, a naive enumeration oracle, and TPTP problem export for
//! external first-order provers.
//!
//! The internal checker enumerates traces of length 1..k over the
//! specification alphabet in lexicographic order of state bit-vectors and
//! returns the first hit, so results are deterministic. When the space
//! exceeds the state budget the caller either gets an error or, when a
//! sampling fallback is configured, a seeded random search whose verdicts
//! are labeled incomplete.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fol::{ordering_axioms, to_fol, FolMode};
use crate::pltl::{eval, parse_formula, print_formula, PltlFormula, Trace};
use crate::specgen::SpecSet;
use crate::workflow::Atom;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReqKind {
    Liveness,
    Safety,
    Other,
}

impl ReqKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReqKind::Liveness => "liveness",
            ReqKind::Safety => "safety",
            ReqKind::Other => "other",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "liveness" => Some(ReqKind::Liveness),
            "safety" => Some(ReqKind::Safety),
            "other" => Some(ReqKind::Other),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Requirement {
    pub name: String,
    pub kind: ReqKind,
    pub formula: PltlFormula,
}

/// Named requirement formulas; names are unique.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RequirementSet {
    requirements: Vec<Requirement>,
}

#[derive(Debug, Error)]
pub enum RequirementError {
    #[error("duplicate requirement name {0:?}")]
    DuplicateName(String),
    #[error("line {line}: requirement lines are 'name: kind: formula'")]
    BadLine { line: usize },
    #[error("line {line}: unknown requirement kind {kind:?}")]
    BadKind { line: usize, kind: String },
    #[error("line {line}: {source}")]
    Formula {
        line: usize,
        source: crate::pltl::FormulaSyntaxError,
    },
    #[error("missing '# wflc:req:v1' header")]
    MissingHeader,
}

impl RequirementSet {
    pub fn new(requirements: Vec<Requirement>) -> Result<Self, RequirementError> {
        let mut seen = Vec::new();
        for r in &requirements {
            if seen.contains(&&r.name) {
                return Err(RequirementError::DuplicateName(r.name.clone()));
            }
            seen.push(&r.name);
        }
        Ok(RequirementSet { requirements })
    }

    pub fn requirements(&self) -> &[Requirement] {
        &self.requirements
    }

    pub fn is_empty(&self) -> bool {
        self.requirements.is_empty()
    }

    /// Parse the line-oriented requirements format: a version header, then
    /// one `name: kind: formula` per line; `#` lines are comments.
    pub fn from_text(text: &str) -> Result<Self, RequirementError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim_start().starts_with("# wflc:req:v1") => {}
            _ => return Err(RequirementError::MissingHeader),
        }
        let mut requirements = Vec::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, rest) = line
                .split_once(':')
                .ok_or(RequirementError::BadLine { line: lineno + 1 })?;
            let (kind, formula_text) = rest
                .split_once(':')
                .ok_or(RequirementError::BadLine { line: lineno + 1 })?;
            let kind = ReqKind::parse(kind.trim()).ok_or_else(|| RequirementError::BadKind {
                line: lineno + 1,
                kind: kind.trim().to_string(),
            })?;
            let formula = parse_formula(formula_text.trim())
                .map_err(|e| RequirementError::Formula { line: lineno + 1, source: e })?;
            requirements.push(Requirement { name: name.trim().to_string(), kind, formula });
        }
        RequirementSet::new(requirements)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# wflc:req:v1\n");
        for r in &self.requirements {
            writeln!(out, "{}: {}: {}", r.name, r.kind.as_str(), print_formula(&r.formula))
                .unwrap();
        }
        out
    }
}

/// How a search space was covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Every trace of length 1..=k was enumerated.
    Exhaustive,
    /// A seeded random sample; absence of a hit proves nothing.
    Sampled { seed: u64, samples: u64 },
}

impl SearchMode {
    pub fn is_exhaustive(self) -> bool {
        matches!(self, SearchMode::Exhaustive)
    }

    pub fn label(self) -> String {
        match self {
            SearchMode::Exhaustive => "exhaustive".to_string(),
            SearchMode::Sampled { seed, samples } => {
                format!("sampled (incomplete; seed={seed}, samples={samples})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// A trace satisfying every formula of the query.
    SatWitness(Trace),
    /// No satisfying trace within the searched space.
    UnsatUpToBound(usize),
    /// No counterexample to the entailment within the searched space.
    SatisfiedUpToBound(usize),
    /// A trace satisfying the specification and violating the requirement.
    CounterexampleFound(Trace),
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub query: String,
    pub outcome: Outcome,
    pub bound: usize,
    pub mode: SearchMode,
    pub elapsed: Duration,
}

#[derive(Debug, Error)]
pub enum DeductionError {
    #[error(
        "alphabet of {atoms} atoms needs {states} candidate traces at bound {bound}, over the budget of {budget}; export the problem for an external prover or enable sampling"
    )]
    AlphabetTooLarge { atoms: usize, states: u128, bound: usize, budget: u64 },
    #[error("the oracle is limited to alphabets of {max_atoms} atoms and bound {max_bound}, got {atoms}/{bound}")]
    OracleLimits { max_atoms: usize, max_bound: usize, atoms: usize, bound: usize },
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("alphabet of {0} atoms cannot be represented (limit 64)")]
    AlphabetUnrepresentable(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Maximum number of candidate traces an exhaustive search may visit.
    pub state_budget: u64,
    /// Seeded random fallback when the budget is exceeded.
    pub sample_fallback: Option<SampleOptions>,
}

#[derive(Debug, Clone, Copy)]
pub struct SampleOptions {
    pub samples: u64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { state_budget: 2_000_000, sample_fallback: None }
    }
}

pub const DEFAULT_SAMPLES: u64 = 20_000;
pub const DEFAULT_SEED: u64 = 7;

/// Number of candidate traces of length 1..=k over `n` atoms.
fn candidate_count(n: usize, k: usize) -> u128 {
    let per_state = 1u128 << n.min(127);
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 1..=k {
        level = level.saturating_mul(per_state);
        total = total.saturating_add(level);
    }
    total
}

/// Formula compiled against a fixed alphabet: propositions are alphabet
/// bit indices, so candidate evaluation needs no lookups or allocation.
enum Compiled {
    Prop(Option<u32>),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Always(Box<Compiled>),
    Sometime(Box<Compiled>),
}

fn compile(f: &PltlFormula, alphabet: &[Atom]) -> Compiled {
    match f {
        PltlFormula::Prop(a) => {
            Compiled::Prop(alphabet.iter().position(|x| x == a).map(|i| i as u32))
        }
        PltlFormula::Not(x) => Compiled::Not(Box::new(compile(x, alphabet))),
        PltlFormula::And(a, b) => {
            Compiled::And(Box::new(compile(a, alphabet)), Box::new(compile(b, alphabet)))
        }
        PltlFormula::Or(a, b) => {
            Compiled::Or(Box::new(compile(a, alphabet)), Box::new(compile(b, alphabet)))
        }
        PltlFormula::Implies(a, b) => {
            Compiled::Implies(Box::new(compile(a, alphabet)), Box::new(compile(b, alphabet)))
        }
        PltlFormula::Always(x) => Compiled::Always(Box::new(compile(x, alphabet))),
        PltlFormula::Sometime(x) => Compiled::Sometime(Box::new(compile(x, alphabet))),
    }
}

/// Positions at which a compiled formula holds, as a bitmask over
/// `0..states.len()`. One bottom-up pass per subformula.
fn positions(c: &Compiled, states: &[u64]) -> u64 {
    let len = states.len();
    let full: u64 = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    match c {
        Compiled::Prop(None) => 0,
        Compiled::Prop(Some(bit)) => {
            let mut m = 0u64;
            for (pos, state) in states.iter().enumerate() {
                if state & (1 << bit) != 0 {
                    m |= 1 << pos;
                }
            }
            m
        }
        Compiled::Not(x) => !positions(x, states) & full,
        Compiled::And(a, b) => positions(a, states) & positions(b, states),
        Compiled::Or(a, b) => positions(a, states) | positions(b, states),
        Compiled::Implies(a, b) => (!positions(a, states) & full) | positions(b, states),
        Compiled::Always(x) => {
            let m = positions(x, states);
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
        Compiled::Sometime(x) => {
            let m = positions(x, states);
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

struct SearchHit {
    trace: Trace,
}

/// Search for a trace satisfying all of `must_hold` at position 0 and, if
/// given, violating `must_fail` at position 0. Any hit is re-checked with
/// the reference evaluator before being returned.
fn search(
    alphabet: &[Atom],
    must_hold: &[&PltlFormula],
    must_fail: Option<&PltlFormula>,
    k: usize,
    opts: &SearchOptions,
) -> Result<(Option<SearchHit>, SearchMode), DeductionError> {
    if k == 0 {
        return Err(DeductionError::ZeroBound);
    }
    if alphabet.len() > 63 {
        return Err(DeductionError::AlphabetUnrepresentable(alphabet.len()));
    }
    let hold: Vec<Compiled> = must_hold.iter().map(|f| compile(f, alphabet)).collect();
    let fail = must_fail.map(|f| compile(f, alphabet));
    let satisfies = |states: &[u64]| -> bool {
        for c in &hold {
            if positions(c, states) & 1 == 0 {
                return false;
            }
        }
        match &fail {
            Some(c) => positions(c, states) & 1 == 0,
            None => true,
        }
    };
    let confirm = |states: &[u64]| -> Trace {
        let trace =
            Trace::new(alphabet.to_vec(), states.to_vec()).expect("alphabet and length validated");
        for f in must_hold {
            assert!(
                eval(f, &trace, 0).expect("position 0 in a non-empty trace"),
                "search returned a trace the reference evaluator rejects: {trace} !|= {}",
                print_formula(f)
            );
        }
        if let Some(f) = must_fail {
            assert!(
                !eval(f, &trace, 0).expect("position 0 in a non-empty trace"),
                "search returned a trace the reference evaluator rejects: {trace} |= {}",
                print_formula(f)
            );
        }
        trace
    };

    let total = candidate_count(alphabet.len(), k);
    if total <= opts.state_budget as u128 {
        let per_state: u64 = 1 << alphabet.len();
        for len in 1..=k {
            let mut states = vec![0u64; len];
            loop {
                if satisfies(&states) {
                    return Ok((
                        Some(SearchHit { trace: confirm(&states) }),
                        SearchMode::Exhaustive,
                    ));
                }
                // Advance the odometer; the last position varies fastest.
                let mut pos = len;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    states[pos] += 1;
                    if states[pos] < per_state {
                        break;
                    }
                    states[pos] = 0;
                }
                if pos == 0 && states[0] == 0 {
                    break;
                }
            }
        }
        return Ok((None, SearchMode::Exhaustive));
    }

    let Some(sample) = opts.sample_fallback else {
        return Err(DeductionError::AlphabetTooLarge {
            atoms: alphabet.len(),
            states: total,
            bound: k,
            budget: opts.state_budget,
        });
    };
    let mode = SearchMode::Sampled { seed: sample.seed, samples: sample.samples };
    let mut rng = ChaCha8Rng::seed_from_u64(sample.seed);
    let mask: u64 = if alphabet.len() == 64 { u64::MAX } else { (1 << alphabet.len()) - 1 };
    for _ in 0..sample.samples {
        let len = rng.gen_range(1..=k);
        let states: Vec<u64> = (0..len).map(|_| rng.gen::<u64>() & mask).collect();
        if satisfies(&states) {
            return Ok((Some(SearchHit { trace: confirm(&states) }), mode));
        }
    }
    Ok((None, mode))
}

fn spec_refs(spec: &SpecSet) -> Vec<&PltlFormula> {
    spec.formulas.iter().collect()
}

/// Search traces of length 1..=k for one satisfying the conjunction of all
/// specification formulas.
pub fn bounded_sat(spec: &SpecSet, k: usize) -> Result<Verdict, DeductionError> {
    bounded_sat_with(spec, k, &SearchOptions::default())
}

pub fn bounded_sat_with(
    spec: &SpecSet,
    k: usize,
    opts: &SearchOptions,
) -> Result<Verdict, DeductionError> {
    let start = Instant::now();
    let alphabet = spec.alphabet();
    let (hit, mode) = search(&alphabet, &spec_refs(spec), None, k, opts)?;
    let outcome = match hit {
        Some(h) => Outcome::SatWitness(h.trace),
        None => Outcome::UnsatUpToBound(k),
    };
    Ok(Verdict {
        query: format!("sat({} formulas, k={k})", spec.formulas.len()),
        outcome,
        bound: k,
        mode,
        elapsed: start.elapsed(),
    })
}

/// For each requirement, search for a trace satisfying the specification
/// and violating the requirement. Finding one refutes the entailment at
/// this bound; finding none is evidence, not proof.
pub fn check_entailment(
    spec: &SpecSet,
    reqs: &RequirementSet,
    k: usize,
) -> Result<Vec<Verdict>, DeductionError> {
    check_entailment_with(spec, reqs, k, &SearchOptions::default())
}

pub fn check_entailment_with(
    spec: &SpecSet,
    reqs: &RequirementSet,
    k: usize,
    opts: &SearchOptions,
) -> Result<Vec<Verdict>, DeductionError> {
    let spec_alphabet = spec.alphabet();
    let mut verdicts = Vec::new();
    for req in reqs.requirements() {
        let start = Instant::now();
        // The requirement may mention atoms the specification never
        // constrains; they extend the alphabet.
        let mut alphabet = spec_alphabet.clone();
        for atom in req.formula.atoms() {
            if !alphabet.contains(&atom) {
                alphabet.push(atom);
            }
        }
        let (hit, mode) = search(&alphabet, &spec_refs(spec), Some(&req.formula), k, opts)?;
        let outcome = match hit {
            Some(h) => Outcome::CounterexampleFound(h.trace),
            None => Outcome::SatisfiedUpToBound(k),
        };
        verdicts.push(Verdict {
            query: format!("entails({}, k={k})", req.name),
            outcome,
            bound: k,
            mode,
            elapsed: start.elapsed(),
        });
    }
    Ok(verdicts)
}

pub const ORACLE_MAX_ATOMS: usize = 5;
pub const ORACLE_MAX_BOUND: usize = 5;

/// Ground truth by full enumeration: every trace of length 1..=k over the
/// given alphabet, every formula checked with the reference evaluator.
/// Deliberately naive; limits are hard caps.
pub fn brute_force_oracle(
    formulas: &[PltlFormula],
    alphabet: &[Atom],
    k: usize,
) -> Result<Verdict, DeductionError> {
    if k == 0 {
        return Err(DeductionError::ZeroBound);
    }
    if alphabet.len() > ORACLE_MAX_ATOMS || k > ORACLE_MAX_BOUND {
        return Err(DeductionError::OracleLimits {
            max_atoms: ORACLE_MAX_ATOMS,
            max_bound: ORACLE_MAX_BOUND,
            atoms: alphabet.len(),
            bound: k,
        });
    }
    let start = Instant::now();
    let per_state: u64 = 1 << alphabet.len();
    for len in 1..=k {
        let mut counter = vec![0u64; len];
        'next: loop {
            let trace = Trace::new(alphabet.to_vec(), counter.clone()).expect("within limits");
            let ok = formulas
                .iter()
                .all(|f| eval(f, &trace, 0).expect("position 0 in a non-empty trace"));
            if ok {
                return Ok(Verdict {
                    query: format!("oracle-sat({} formulas, k={k})", formulas.len()),
                    outcome: Outcome::SatWitness(trace),
                    bound: k,
                    mode: SearchMode::Exhaustive,
                    elapsed: start.elapsed(),
                });
            }
            for pos in (0..len).rev() {
                counter[pos] += 1;
                if counter[pos] < per_state {
                    continue 'next;
                }
                counter[pos] = 0;
            }
            break;
        }
    }
    Ok(Verdict {
        query: format!("oracle-sat({} formulas, k={k})", formulas.len()),
        outcome: Outcome::UnsatUpToBound(k),
        bound: k,
        mode: SearchMode::Exhaustive,
        elapsed: start.elapsed(),
    })
}

/// One exported TPTP problem; `requirement` is None for the axioms-only
/// problem produced when the requirement set is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TptpProblem {
    pub requirement: Option<String>,
    pub text: String,
}

/// Emit TPTP fof problems: every specification formula as an axiom and
/// each requirement as the conjecture of its own problem.
pub fn export_tptp(spec: &SpecSet, reqs: &RequirementSet, mode: FolMode) -> Vec<TptpProblem> {
    let mut axioms = String::new();
    if mode == FolMode::Ordered {
        for (name, text) in ordering_axioms() {
            writeln!(axioms, "fof({name}, axiom, {text}).").unwrap();
        }
    }
    for (i, f) in spec.formulas.iter().enumerate() {
        writeln!(axioms, "fof(spec_{}, axiom, {}).", i + 1, to_fol(f, mode)).unwrap();
    }
    let header = |req: Option<&str>| {
        let mut s = String::new();
        writeln!(s, "% generated by wflc ({} mode)", mode.as_str()).unwrap();
        writeln!(s, "% entry={} exit={}", spec.root_entry, spec.root_exit).unwrap();
        if let Some(name) = req {
            writeln!(s, "% conjecture: {name}").unwrap();
        }
        s
    };
    if reqs.is_empty() {
        return vec![TptpProblem { requirement: None, text: format!("{}{axioms}", header(None)) }];
    }
    reqs.requirements()
        .iter()
        .map(|req| {
            let mut text = header(Some(&req.name));
            text.push_str(&axioms);
            writeln!(
                text,
                "fof(req_{}, conjecture, {}).",
                sanitize_name(&req.name),
                to_fol(&req.formula, mode)
            )
            .unwrap();
            TptpProblem { requirement: Some(req.name.clone()), text }
        })
        .collect()
}

fn sanitize_name(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if !out.starts_with(|c: char| c.is_ascii_lowercase()) {
        out.insert(0, 'r');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_text::parse_expr;
    use crate::specgen::pi_c;

    fn seq_spec() -> SpecSet {
        pi_c(&parse_expr("Seq(a,b)").unwrap()).unwrap()
    }

    fn trace_of(v: &Verdict) -> &Trace {
        match &v.outcome {
            Outcome::SatWitness(t) | Outcome::CounterexampleFound(t) => t,
            other => panic!("expected a trace, got {other:?}"),
        }
    }

    #[test]
    fn seq_witness_is_lexicographically_first() {
        let v = bounded_sat(&seq_spec(), 2).unwrap();
        assert_eq!(trace_of(&v).to_string(), "[{a} {b}]");
        assert!(v.mode.is_exhaustive());
    }

    #[test]
    fn direct_contradiction_is_unsat() {
        let spec = SpecSet {
            formulas: vec![
                parse_formula("<>a").unwrap(),
                parse_formula("[]!a").unwrap(),
            ],
            root_entry: Atom::new("a").unwrap(),
            root_exit: Atom::new("a").unwrap(),
        };
        let v = bounded_sat(&spec, 4).unwrap();
        assert_eq!(v.outcome, Outcome::UnsatUpToBound(4));
    }

    #[test]
    fn empty_spec_is_vacuously_satisfiable() {
        let spec = SpecSet {
            formulas: vec![],
            root_entry: Atom::new("a").unwrap(),
            root_exit: Atom::new("a").unwrap(),
        };
        let v = bounded_sat(&spec, 1).unwrap();
        assert_eq!(trace_of(&v).to_string(), "[{}]");
    }

    #[test]
    fn entailment_member_formula_is_satisfied() {
        let reqs = RequirementSet::new(vec![Requirement {
            name: "r1".into(),
            kind: ReqKind::Liveness,
            formula: parse_formula("[](a -> <>b)").unwrap(),
        }])
        .unwrap();
        let vs = check_entailment(&seq_spec(), &reqs, 3).unwrap();
        assert_eq!(vs[0].outcome, Outcome::SatisfiedUpToBound(3));
    }

    #[test]
    fn entailment_counterexample_is_found_and_confirmed() {
        let reqs = RequirementSet::new(vec![Requirement {
            name: "never_a".into(),
            kind: ReqKind::Safety,
            formula: parse_formula("[]!a").unwrap(),
        }])
        .unwrap();
        let vs = check_entailment(&seq_spec(), &reqs, 2).unwrap();
        let trace = trace_of(&vs[0]);
        assert_eq!(trace.to_string(), "[{a} {b}]");
    }

    #[test]
    fn requirement_atoms_extend_the_alphabet() {
        let reqs = RequirementSet::new(vec![Requirement {
            name: "foreign".into(),
            kind: ReqKind::Other,
            formula: parse_formula("[]!z").unwrap(),
        }])
        .unwrap();
        let vs = check_entailment(&seq_spec(), &reqs, 2).unwrap();
        // z is unconstrained by the spec, so a model with z somewhere refutes [].
        assert!(matches!(vs[0].outcome, Outcome::CounterexampleFound(_)));
    }

    #[test]
    fn oracle_matches_stated_examples() {
        let a = Atom::new("a").unwrap();
        let some_a = parse_formula("<>a").unwrap();
        let v = brute_force_oracle(&[some_a.clone()], &[a.clone()], 1).unwrap();
        assert_eq!(trace_of(&v).to_string(), "[{a}]");
        let never_a = parse_formula("[]!a").unwrap();
        let v = brute_force_oracle(&[some_a, never_a], &[a], 3).unwrap();
        assert_eq!(v.outcome, Outcome::UnsatUpToBound(3));
    }

    #[test]
    fn oracle_enforces_limits() {
        let atoms: Vec<Atom> =
            ["a", "b", "c", "d", "e", "f"].iter().map(|s| Atom::new(s).unwrap()).collect();
        assert!(matches!(
            brute_force_oracle(&[], &atoms, 2),
            Err(DeductionError::OracleLimits { .. })
        ));
    }

    #[test]
    fn budget_exceeded_without_fallback_errors() {
        let spec = pi_c(
            &parse_expr("Loop(a,Cond(b,c,d,e),Para(f,g,h,i),Alt(j,k,l))").unwrap(),
        )
        .unwrap();
        let opts = SearchOptions { state_budget: 10, sample_fallback: None };
        assert!(matches!(
            bounded_sat_with(&spec, 3, &opts),
            Err(DeductionError::AlphabetTooLarge { .. })
        ));
    }

    #[test]
    fn sampling_fallback_is_labeled() {
        let spec = seq_spec();
        let opts = SearchOptions {
            state_budget: 1,
            sample_fallback: Some(SampleOptions { samples: 500, seed: 11 }),
        };
        let v = bounded_sat_with(&spec, 2, &opts).unwrap();
        assert!(!v.mode.is_exhaustive());
        assert!(v.mode.label().contains("incomplete"));
        // A seq spec is easy to hit by sampling; either way the mode is sampled.
        match v.outcome {
            Outcome::SatWitness(_) | Outcome::UnsatUpToBound(_) => {}
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn zero_bound_is_rejected() {
        assert!(matches!(bounded_sat(&seq_spec(), 0), Err(DeductionError::ZeroBound)));
    }

    #[test]
    fn requirements_text_round_trips() {
        let text = "# wflc:req:v1\nr1: liveness: [](4 -> <>11)\nr2: safety: []!(3 & 21')\n";
        let reqs = RequirementSet::from_text(text).unwrap();
        assert_eq!(reqs.to_text(), text);
        assert_eq!(reqs.requirements()[0].kind, ReqKind::Liveness);
    }

    #[test]
    fn duplicate_requirement_names_rejected() {
        let text = "# wflc:req:v1\nr1: safety: a\nr1: safety: b\n";
        assert!(matches!(
            RequirementSet::from_text(text),
            Err(RequirementError::DuplicateName(_))
        ));
    }

    #[test]
    fn tptp_export_shapes() {
        let spec = seq_spec();
        let reqs = RequirementSet::from_text("# wflc:req:v1\nr1: liveness: [](a -> <>b)\n").unwrap();
        let problems = export_tptp(&spec, &reqs, FolMode::Simple);
        assert_eq!(problems.len(), 1);
        let text = &problems[0].text;
        assert_eq!(text.matches("axiom").count(), 3);
        assert_eq!(text.matches("conjecture").count(), 2); // header comment + role
        assert!(text.contains("fof(req_r1, conjecture,"));

        let none = export_tptp(&spec, &RequirementSet::default(), FolMode::Ordered);
        assert_eq!(none.len(), 1);
        assert!(none[0].text.contains("leq_reflexive"));
        assert!(!none[0].text.contains("conjecture"));
    }
}
