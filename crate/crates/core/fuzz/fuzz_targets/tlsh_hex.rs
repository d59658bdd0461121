#![no_main]

use imatch_core::fuzzy_hash::{tlsh_distance, TlshDigest};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = text.parse::<TlshDigest>() {
        let again: TlshDigest = d.to_hex().parse().expect("printed digest parses");
        assert_eq!(d, again);
        assert_eq!(tlsh_distance(&d, &again, true), 0);
    }
});
