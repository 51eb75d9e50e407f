//! Temporal-formula parser must never panic; accepted input round-trips
//! through the minimal-parentheses printer.

#![no_main]

use libfuzzer_sys::fuzz_target;
use wflc::pltl::{parse_formula, print_formula};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(formula) = parse_formula(text) {
        let printed = print_formula(&formula);
        let reparsed = parse_formula(&printed).expect("canonical output must parse");
        assert_eq!(reparsed, formula);
    }
});
