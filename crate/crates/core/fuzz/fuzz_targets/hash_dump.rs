#![no_main]

use imatch_core::fuzzy_hash::parse_hash_dump;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(lines) = parse_hash_dump(text) {
        let printed: String = lines.iter().map(|l| format!("{l}\n")).collect();
        assert_eq!(parse_hash_dump(&printed).expect("printed dump parses"), lines);
    }
});
