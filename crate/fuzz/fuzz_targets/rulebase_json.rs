#![no_main]

use libfuzzer_sys::fuzz_target;

use seqcol::io;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Accepted rule-bases must be well-formed: d-bounded patterns and the
    // edge-exclusion rule present.
    if let Ok(rb) = io::parse_rulebase(text) {
        assert!(!rb.structural().is_empty());
        for rule in rb.structural() {
            assert!(rule.diameter().is_some_and(|d| d <= rb.bound()));
        }
    }
});
