#![no_main]

//! Fuzzes the node-set file parser: no panics, and every accepted line
//! yields at least one non-empty label.

use libfuzzer_sys::fuzz_target;
use stubborn_opt::parse::parse_sets_file;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sets) = parse_sets_file(text) {
        for set in &sets {
            assert!(!set.is_empty());
            for label in set {
                assert!(!label.is_empty());
                assert!(!label.contains(','));
            }
        }
    }
});
