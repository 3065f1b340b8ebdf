use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "frep-core", "tests", "fixtures", &format!("{name}.frep")].iter().collect();
    p.to_string_lossy().into_owned()
}

fn frep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frep")).args(args).env_remove("FREP_ROW_CAP").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_intro() {
    let intro = fixture("intro");
    let o = frep(&["eval", &intro, "-n", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "dim = 4");
    let o = frep(&["eval", &intro, "-n", "0"]);
    assert_eq!(stdout(&o).trim(), "dim = 0");
}

#[test]
fn eval_table_counts_fixed_points() {
    let o = frep(&["eval", &fixture("intro"), "-n", "3", "--table"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("(1,1,1): 3"), "{out}");
    assert!(out.contains("(2,1): 1"), "{out}");
    assert!(out.contains("(3): 0"), "{out}");
    let o = frep(&["eval", &fixture("intro"), "-n", "3", "--character", "231"]);
    assert!(stdout(&o).contains("chi(231) = 0"));
}

#[test]
fn resolve_intro_text() {
    let o = frep(&["resolve", &fixture("intro")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("term 0: P(1,1) ⊕ P(2)"), "{out}");
    assert!(out.contains("term 2: D4 ⊕ D3 ⊕ P(1)"), "{out}");
    assert!(out.contains("dim_poly: n\n"), "{out}");
    assert!(out.contains("char_poly: x1\n"), "{out}");
}

#[test]
fn resolve_projective_and_json() {
    let o = frep(&["resolve", "builtin:tensor/3"]);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("term ")).count(), 1);
    assert!(out.contains("char_poly: x1^3"));

    let o = frep(&["resolve", "builtin:lambda/2", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("valid JSON");
    assert_eq!(v["char_poly"], "1/2*x1^2 - 1/2*x2");
    assert_eq!(v["terms"].as_array().map(Vec::len), Some(1));
}

#[test]
fn resolve_with_verification() {
    let o = frep(&["resolve", "builtin:d/3", "--verify", "6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("verified: n = 0..=6"));
}

#[test]
fn squishers() {
    let o = frep(&["squisher", "--upper", "2", "4"]);
    assert_eq!(stdout(&o).trim(), "1123 - 1124 - 1133 + 1134 - 1223 + 1224 + 1233");
    let o = frep(&["squisher", "--lower", "2"]);
    assert!(o.status.success());
    assert!(!stdout(&o).trim().is_empty());
    let o = frep(&["squisher", "--lower", "0"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = frep(&["squisher", "--lower", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_fixtures() {
    for name in ["intro", "off_diagonal", "symmetric_square", "mixed_degrees", "injections3", "wedge_times_line"] {
        let o = frep(&["verify", &fixture(name), "--n-max", "4"]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn verify_empty_relations() {
    let dir = std::env::temp_dir().join(format!("frep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("free.frep");
    std::fs::write(&path, "object Y = [2]\nmap f : [2] -> Y = [[ 12 + 21 ]]\npresent S = <f>\n").unwrap();
    let o = frep(&["verify", path.to_str().unwrap(), "--n-max", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("frep-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.frep");
    std::fs::write(&bad, "object Y = [2]\npresent V = <Y> / <g>\n").unwrap();
    let o = frep(&["verify", bad.to_str().unwrap(), "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let o = frep(&["eval", "builtin:nonsense/3", "-n", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = frep(&["eval", "builtin:tensor/3", "-n", "3", "--row-cap", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_frep")).args(["eval", "builtin:tensor/3", "-n", "3"]).env("FREP_ROW_CAP", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}
