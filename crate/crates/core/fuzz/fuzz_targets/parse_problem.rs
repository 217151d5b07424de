#![no_main]

use gwdeg_core::problem::Problem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Err(e) = Problem::parse(text) {
        let loc = e.location();
        assert!(loc.line >= 1 && loc.column >= 1);
    }
});
