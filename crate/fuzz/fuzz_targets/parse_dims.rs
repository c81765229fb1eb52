#![no_main]

use libfuzzer_sys::fuzz_target;
use wvu_core::problem::parse_dims;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(dims) = parse_dims(text) {
            assert!(!dims.is_empty() && dims.iter().all(|&d| d >= 2));
        }
    }
});
