#![no_main]

use libfuzzer_sys::fuzz_target;
use mso_core::structures::Structure;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(a) = Structure::from_json(text) {
        let again = Structure::from_json(&a.to_json()).expect("printed structure parses");
        assert_eq!(a, again);
    }
});
