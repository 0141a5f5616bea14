#![no_main]

use krausforge::model::{load_model, save_model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sys) = load_model(text) {
        let again = load_model(&save_model(&sys)).expect("saved model reloads");
        assert_eq!(again, sys);
    }
});
