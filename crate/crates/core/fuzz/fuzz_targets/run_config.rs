#![no_main]

use imatch_core::bench::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = RunConfig::from_json(data) {
        let again = RunConfig::from_json(&cfg.to_json()).expect("re-serialized config parses");
        assert_eq!(again.canonical_name(), cfg.canonical_name());
    }
});
