//! Pattern-expression parser must never panic, and anything it accepts
//! must round-trip through the canonical printer.

#![no_main]

use libfuzzer_sys::fuzz_target;
use wflc::expr_text::{parse_expr, print_expr};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(expr) = parse_expr(text) {
        let printed = print_expr(&expr);
        let reparsed = parse_expr(&printed).expect("canonical output must parse");
        assert_eq!(reparsed, expr);
        assert_eq!(print_expr(&reparsed), printed);
    }
});
