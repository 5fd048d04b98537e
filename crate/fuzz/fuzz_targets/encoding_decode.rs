#![no_main]

use libfuzzer_sys::fuzz_target;
use mso_core::encodings::{catalog, decode};
use mso_core::structures::Structure;

// First byte picks the catalog entry, the rest is structure JSON.
fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let Ok(b) = Structure::from_json(text) else { return };
    if b.size() > 24 {
        return;
    }
    let entries = catalog();
    let e = &entries[pick as usize % entries.len()];
    let _ = decode(&e.id, &b);
});
