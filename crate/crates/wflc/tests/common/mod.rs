//! Seeded random generators shared by the integration suites. Everything
//! here is deterministic for a fixed seed.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wflc::pltl::{PltlFormula, Trace};
use wflc::workflow::{Atom, PatternExpr, PatternKind};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn atom(name: &str) -> Atom {
    Atom::new(name).unwrap()
}

pub const NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// A random pattern expression of at most `depth` nested pattern levels,
/// activities drawn from a running counter so leaves are distinct.
pub fn random_expr(rng: &mut StdRng, depth: usize, next_leaf: &mut u32) -> PatternExpr {
    let leaf = |next_leaf: &mut u32| {
        let e = PatternExpr::activity(&format!("n{}", *next_leaf));
        *next_leaf += 1;
        e
    };
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(next_leaf);
    }
    let kind = PatternKind::ALL[rng.gen_range(0..PatternKind::ALL.len())];
    let args = (0..kind.arity()).map(|_| random_expr(rng, depth - 1, next_leaf)).collect();
    PatternExpr::pattern(kind, args).unwrap()
}

/// A random pattern expression whose root is a pattern node.
pub fn random_pattern(rng: &mut StdRng, depth: usize) -> PatternExpr {
    let mut next_leaf = 0;
    loop {
        let e = random_expr(rng, depth, &mut next_leaf);
        if !e.is_activity() {
            return e;
        }
    }
}

/// A random formula of at most `depth` over the first `alphabet` names.
pub fn random_formula(rng: &mut StdRng, depth: usize, alphabet: usize) -> PltlFormula {
    if depth == 0 || rng.gen_bool(0.25) {
        return PltlFormula::Prop(atom(NAMES[rng.gen_range(0..alphabet)]));
    }
    match rng.gen_range(0..6) {
        0 => PltlFormula::not(random_formula(rng, depth - 1, alphabet)),
        1 => PltlFormula::and(
            random_formula(rng, depth - 1, alphabet),
            random_formula(rng, depth - 1, alphabet),
        ),
        2 => PltlFormula::or(
            random_formula(rng, depth - 1, alphabet),
            random_formula(rng, depth - 1, alphabet),
        ),
        3 => PltlFormula::implies(
            random_formula(rng, depth - 1, alphabet),
            random_formula(rng, depth - 1, alphabet),
        ),
        4 => PltlFormula::always(random_formula(rng, depth - 1, alphabet)),
        _ => PltlFormula::sometime(random_formula(rng, depth - 1, alphabet)),
    }
}

/// A random trace of length 1..=max_len over the first `alphabet` names.
pub fn random_trace(rng: &mut StdRng, max_len: usize, alphabet: usize) -> Trace {
    let atoms: Vec<Atom> = NAMES[..alphabet].iter().map(|n| atom(n)).collect();
    let len = rng.gen_range(1..=max_len);
    let mask: u64 = (1 << alphabet) - 1;
    let states: Vec<u64> = (0..len).map(|_| rng.gen::<u64>() & mask).collect();
    Trace::new(atoms, states).unwrap()
}

pub fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}
