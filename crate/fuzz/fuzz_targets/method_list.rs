#![no_main]

use krausforge::bench::parse_methods;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(methods) = parse_methods(text) {
        assert!(!methods.is_empty());
    }
});
