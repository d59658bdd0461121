#![no_main]

use imatch_core::model::GroundTruth;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(gt) = GroundTruth::from_json(data) {
        let again = GroundTruth::from_json(&gt.to_json()).expect("re-serialized ground truth parses");
        assert_eq!(gt, again);
    }
});
