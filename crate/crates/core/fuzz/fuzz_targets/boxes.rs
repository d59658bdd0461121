#![no_main]

use imatch_core::imaging::BoxList;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(boxes) = BoxList::from_json(data) {
        let clipped = boxes.clipped(64, 48);
        assert!(clipped.len() <= boxes.len());
    }
});
