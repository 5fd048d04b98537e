#![no_main]

use libfuzzer_sys::fuzz_target;
use mso_core::width::{decode_decomposition, CompiledDecomposition};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = CompiledDecomposition::from_json(text) {
        let _ = decode_decomposition(&s);
    }
});
