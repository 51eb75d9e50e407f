//! Compositional workflow expressions compiled to equivalent temporal-logic
//! specifications, with a bounded deductive checker and oracle, TPTP export
//! for first-order provers, an LLM-assisted scenario front-end, and
//! Java/Python skeleton generation.

pub mod cli;
pub mod codegen;
pub mod config;
pub mod deduction;
pub mod expr_text;
pub mod fol;
pub mod llm;
pub mod pltl;
pub mod scenario;
pub mod specgen;
pub mod workflow;

pub use expr_text::{parse_expr, print_expr};
pub use pltl::{parse_formula, print_formula, PltlFormula, Trace};
pub use specgen::{pi_c, SpecSet};
pub use workflow::{atoms_of, inline_calls, pi_scan, Atom, DiagramDoc, PatternExpr, PatternKind};
