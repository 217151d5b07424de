#![no_main]

use gwdeg_core::problem::parse_field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(k) = parse_field(text) {
        assert_eq!(parse_field(&k.to_string()).expect("display form parses"), k);
    }
});
