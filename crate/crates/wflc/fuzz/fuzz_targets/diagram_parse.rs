//! Diagram-document JSON decoding and call inlining on untrusted input:
//! no panics, and inlined output satisfies the expression invariants.

#![no_main]

use libfuzzer_sys::fuzz_target;
use wflc::cli::parse_diagram_str;
use wflc::expr_text::{parse_expr, print_expr};
use wflc::workflow::inline_calls;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = parse_diagram_str(text, "fuzz") {
        if let Ok(expr) = inline_calls(&doc) {
            let printed = print_expr(&expr);
            assert_eq!(parse_expr(&printed).expect("inlined output must print parseably"), expr);
        }
    }
});
