#![no_main]

use krausforge::kraus::io::extraction_from_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((dim, _, terms)) = extraction_from_json(text) {
        assert!(terms.iter().all(|t| t.operator.rows() == dim));
    }
});
