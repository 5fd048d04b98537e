#![no_main]

use libfuzzer_sys::fuzz_target;
use mso_core::algebra::{factorize, FiniteMonoid, Homomorphism};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = FiniteMonoid::from_json(text) {
        let word: Vec<usize> = (0..m.size()).collect();
        let t = factorize(&m, &word).expect("factorizes its own elements");
        t.validate(&m).expect("valid factorization");
    }
    let _ = serde_json::from_str::<Homomorphism>(text);
});
