#![no_main]

use imatch_core::features::{read_feature_dump, write_feature_dump};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(fs) = read_feature_dump(data) {
        let bytes = write_feature_dump(&fs);
        let again = read_feature_dump(&bytes).expect("re-written dump parses");
        assert_eq!(write_feature_dump(&again), bytes);
    }
});
