use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gwdeg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwdeg")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn gaussian() -> String {
    fixture("gaussian.toml").display().to_string()
}

#[test]
fn degree_of_gaussian_point() {
    for method in ["direct", "trace"] {
        let out = run(&["degree", &gaussian(), "--method", method, "--json"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        let class = &v["points"][0]["result"]["class"];
        assert_eq!(class["rank"], 2);
        assert_eq!(class["signature"], 0);
        assert_eq!(class["det_square_class"], "-1");
        assert_eq!(v["points"][0]["result"]["method"], method);
    }
}

#[test]
fn positive_dimensional_system_exits_3() {
    let path = scratch("line.toml", "field = \"Q\"\nvariables = [\"x\", \"y\"]\npolynomials = [\"x*y\", \"0\"]\n\n[[points]]\ncoordinates = [\"0\", \"0\"]\n");
    let out = run(&["degree", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotZeroDimensional"));
}

#[test]
fn syntax_error_exits_2_with_position() {
    let path = scratch("bad.toml", "field = \"Q\"\nvariables = [\"x\"]\npolynomials = [\"x^^2\"]\n");
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("3:"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn reducible_extension_exits_3() {
    let path = scratch(
        "reducible.toml",
        "field = \"Q\"\nvariables = [\"x\"]\npolynomials = [\"x^2 - 1\"]\n\n[[points]]\nextension = { generator = \"a\", min_poly = \"a^2 - 1\" }\ncoordinates = [\"a\"]\n",
    );
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn verify_agrees_and_fault_is_caught() {
    let cube = run(&["verify", fixture("cube_root.toml").to_str().unwrap(), "--json"]);
    assert_eq!(cube.status.code(), Some(0));
    assert_eq!(json(&cube)["points"][0]["verdict"], "Equal");
    let ok = run(&["verify", &gaussian()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("verdict: Equal"));
    let bad = run(&["verify", &gaussian(), "--inject-fault", "--json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["verdict"], "NotEqual");
}

#[test]
fn global_degree() {
    let out = run(&["global", fixture("rational_pair.toml").to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let class = &json(&out)["global"]["class"];
    assert_eq!(class["rank"], 2);
    assert_eq!(class["det_square_class"], "-1");
    assert_eq!(class["signature"], 0);
}

#[test]
fn invariants_of_hyperbolic_plane() {
    let out = run(&["invariants", "--field", "Q", "--diag", "1, -1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["class"]["det_square_class"], "-1");
    assert_eq!(v["class"]["signed_discriminant"], "1");
    assert_eq!(v["class"]["signature"], 0);
    assert!(v["class"]["hasse_witt"].as_object().unwrap().values().all(|s| s == 1));
    let single = run(&["invariants", "--field", "Q(a : a^2 - 2)", "--diag", "a", "--json"]);
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(json(&single)["class"]["rank"], 1);
    assert_eq!(run(&["invariants", "--field", "F7", "--diag", "0"]).status.code(), Some(3));
    assert_eq!(run(&["invariants", "--field", "F8", "--diag", "1"]).status.code(), Some(3));
    assert_eq!(run(&["invariants", "--field", "Q[", "--diag", "1"]).status.code(), Some(2));
}

#[test]
fn undecided_over_number_field_exits_4_on_request() {
    let path = fixture("gaussian_base.toml");
    let path = path.to_str().unwrap();
    assert_eq!(run(&["degree", path]).status.code(), Some(0));
    assert_eq!(run(&["degree", path, "--require-decided"]).status.code(), Some(4));
}

#[test]
fn json_is_byte_identical_across_runs() {
    let path = fixture("swap_system.toml");
    let path = path.to_str().unwrap();
    let a = run(&["verify", path, "--json", "--seed", "7"]);
    let b = run(&["verify", path, "--json", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["points"][0]["timings_ms"].is_null());
    let timed = run(&["verify", path, "--json", "--timings"]);
    assert!(json(&timed)["points"][0]["timings_ms"]["direct"].is_number());
}
