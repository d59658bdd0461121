#![no_main]

use imatch_core::bench::{generate_configs, SweepGrid};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(grid) = SweepGrid::from_json(data) {
        if let Ok(configs) = generate_configs(&grid) {
            assert!(!configs.is_empty());
        }
    }
});
