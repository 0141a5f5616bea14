#![no_main]

use krausforge::kraus::io::{kraus_from_json, kraus_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ks) = kraus_from_json(text) {
        assert_eq!(
            kraus_from_json(&kraus_to_json(&ks)).expect("dump reloads"),
            ks
        );
    }
});
