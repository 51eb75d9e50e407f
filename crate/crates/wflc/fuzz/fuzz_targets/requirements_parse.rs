//! Requirements-file parser: no panics, and accepted files round-trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use wflc::deduction::RequirementSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(reqs) = RequirementSet::from_text(text) {
        let serialized = reqs.to_text();
        let reparsed = RequirementSet::from_text(&serialized).expect("serialized set must parse");
        assert_eq!(reparsed, reqs);
    }
});
