#![no_main]

use imatch_core::imaging::{decode_image, to_grayscale};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = decode_image(data, None) {
        let gray = to_grayscale(&img);
        assert_eq!((gray.width(), gray.height()), (img.width(), img.height()));
    }
});
