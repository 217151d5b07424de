#![no_main]

use gwdeg_core::field::FieldDescriptor;
use gwdeg_core::multipoly::parse;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    for k in [FieldDescriptor::rationals(), FieldDescriptor::prime(7).unwrap()] {
        if let Ok(p) = parse(text, &vars, &k) {
            // printing and reparsing must give the same polynomial
            let again = parse(&p.to_string(), &vars, &k).expect("printed form parses");
            assert_eq!(again, p);
        }
    }
});
