//! The fuzz-target properties, replayed over the checked-in seeds and over
//! generated inputs.

use std::path::PathBuf;

use gwdeg_core::field::FieldDescriptor;
use gwdeg_core::multipoly::parse;
use gwdeg_core::problem::{parse_field, Problem};
use proptest::prelude::*;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    out
}

fn expression_roundtrip(text: &str) -> bool {
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let mut parsed = false;
    for k in [FieldDescriptor::rationals(), FieldDescriptor::prime(7).unwrap()] {
        if let Ok(p) = parse(text, &vars, &k) {
            let again = parse(&p.to_string(), &vars, &k).expect("printed form parses");
            assert!(again == p, "{text:?} printed as {p}");
            parsed = true;
        }
    }
    parsed
}

fn field_roundtrip(text: &str) -> bool {
    match parse_field(text) {
        Ok(k) => {
            assert_eq!(parse_field(&k.to_string()).expect("display form parses"), k);
            true
        }
        Err(_) => false,
    }
}

#[test]
fn expression_seeds() {
    let parsed = seeds("parse_expression").iter().filter(|s| expression_roundtrip(s)).count();
    assert_eq!(parsed, 8);
}

#[test]
fn field_seeds() {
    let parsed = seeds("parse_field").iter().filter(|s| field_roundtrip(s)).count();
    assert_eq!(parsed, 7);
}

#[test]
fn problem_seeds() {
    let all = seeds("parse_problem");
    let ok = all.iter().filter(|s| Problem::parse(s).is_ok()).count();
    assert_eq!(ok, all.len() - 1);
    for s in &all {
        if let Err(e) = Problem::parse(s) {
            assert_eq!((e.location().line, e.location().column), (3, 19));
        }
    }
}

proptest! {
    #[test]
    fn expressions_never_panic(text in "[xyz0-9+*/^() -]{0,24}") {
        expression_roundtrip(&text);
    }

    #[test]
    fn fields_never_panic(text in "(Q|F|GF|QQ)?[0-9()a-z: ^+-]{0,16}") {
        field_roundtrip(&text);
    }

    #[test]
    fn problems_never_panic(text in "[a-z\\[\\]=\"{},.:^0-9 \n]{0,80}") {
        if let Err(e) = Problem::parse(&text) {
            prop_assert!(e.location().line >= 1 && e.location().column >= 1);
        }
    }
}
