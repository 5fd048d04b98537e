#![no_main]

use libfuzzer_sys::fuzz_target;
use mso_core::matroid::AnyMatroid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = AnyMatroid::from_json(text);
});
