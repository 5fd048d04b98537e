#![no_main]

use libfuzzer_sys::fuzz_target;
use mso_core::logic::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse(text) {
        let again = parse(&f.to_string()).expect("printed formula parses");
        assert_eq!(f, again);
    }
});
