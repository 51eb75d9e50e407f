//! Tag markup parser must never panic; valid trees round-trip through the
//! renderer, and extraction/mapping must accept whatever the parser does.

#![no_main]

use libfuzzer_sys::fuzz_target;
use wflc::scenario::{extract_vocabulary, map_structure, parse_tags, render};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(scenario) = parse_tags(text) {
        let rendered = render(&scenario);
        let reparsed = parse_tags(&rendered).expect("rendered markup must parse");
        assert_eq!(reparsed, scenario);
        let _ = extract_vocabulary(&scenario);
        let draft = map_structure(&scenario);
        // Every hole carries a diagnostic: completion without edits fails.
        if !draft.diagnostics.is_empty() && draft.roots.len() == 1 {
            assert!(draft.complete(&Default::default()).is_err());
        }
    }
});
