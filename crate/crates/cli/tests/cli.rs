use std::path::{Path, PathBuf};
use std::process::Command;

use regquot_cli::{parse_job, render_job, run_job, Overrides};
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> PathBuf {
    root().join("jobs").join(name)
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let v: Value = serde_json::from_str(&read(&root().join("schemas").join(name))).unwrap();
    jsonschema::JSONSchema::compile(&v).unwrap()
}

fn regquot(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_regquot")).args(args).output().unwrap()
}

fn all_fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("jobs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "job"))
        .collect();
    v.sort();
    v
}

#[test]
fn golden_reports() {
    for name in ["k1_p2", "exa", "k2_p2_presentation", "xx_check_regular"] {
        let dir = tempfile::tempdir().unwrap();
        let json = dir.path().join("r.json");
        let job = fixture(&format!("{name}.job"));
        let out = regquot(&[job.to_str().unwrap(), "--json", json.to_str().unwrap()]);
        let golden = root().join("tests/golden");
        assert_eq!(String::from_utf8(out.stdout).unwrap(), read(&golden.join(format!("{name}.txt"))), "{name}");
        assert_eq!(read(&json), read(&golden.join(format!("{name}.json"))), "{name}");
    }
}

#[test]
fn fixtures_parse_and_match_schema() {
    let jobs = schema("job.schema.json");
    let reports = schema("report.schema.json");
    for path in all_fixtures() {
        let text = read(&path);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!(jobs.is_valid(&v), "{}", path.display());
        let job = parse_job(&text).unwrap();
        let rendered = render_job(&job);
        assert!(jobs.is_valid(&serde_json::from_str(&rendered).unwrap()));
        assert_eq!(render_job(&parse_job(&rendered).unwrap()), rendered, "{}", path.display());
        let report = run_job(&job, Overrides::default()).unwrap();
        let rv: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert!(reports.is_valid(&rv), "{}", path.display());
    }
}

#[test]
fn output_is_deterministic() {
    let job = fixture("k2_p2_presentation.job");
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(Vec<u8>, String)> = (0..2)
        .map(|i| {
            let p = dir.path().join(format!("{i}.json"));
            let out = regquot(&[job.to_str().unwrap(), "--json", p.to_str().unwrap()]);
            (out.stdout, read(&p))
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn fixture_outcomes() {
    let job = |name: &str| parse_job(&read(&fixture(name))).unwrap();
    let k1 = job("k1_p2.job");
    assert_eq!(k1.scenario.as_ref().map(|s| (s.p, s.n)), Some((2, 1)));
    let projection = job("exa.job");
    assert_eq!(projection.command, regquot_cli::Command::Naturality);
    let r = run_job(&projection, Overrides::default()).unwrap();
    assert_eq!(r.results["images"][0], "3·b");
    let r = run_job(&job("k2_p2_presentation.job"), Overrides::default()).unwrap();
    assert_eq!(r.results["text"], "Λ(a0) ⊗ T(a1)/(a1^2 − v2)");
    assert_eq!(r.results["relations"].as_array().unwrap().len(), 3);
    let r = run_job(&job("k1_p2_multiply.job"), Overrides::default()).unwrap();
    assert_eq!(r.results["product"], "v1·1");
    let r = run_job(&job("decompose_v1.job"), Overrides::default()).unwrap();
    assert_eq!(r.results["mutually_inverse"], true);
}

#[test]
fn exit_codes() {
    let ok = regquot(&[fixture("k1_p2.job").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let refuted = regquot(&[fixture("xx_check_regular.job").to_str().unwrap()]);
    assert_eq!(refuted.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.job");
    std::fs::write(&bad, "{\n  \"command\": \"scenario\",\n  \"scenario\": {\"p\": 2 \"n\": 1}\n}\n").unwrap();
    let out = regquot(&[bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));

    let odd = dir.path().join("odd.job");
    std::fs::write(
        &odd,
        r#"{"command": "presentation", "ring": {"base": "Z", "generators": [{"name": "x", "degree": 1}]},
            "sequence": [{"element": "x"}], "window": {"degree": 4, "laurent": 0}}"#,
    )
    .unwrap();
    assert_eq!(regquot(&[odd.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn window_flags_override_the_job() {
    let job = fixture("k1_p2.job");
    let out = regquot(&[job.to_str().unwrap(), "--window", "10", "--laurent", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("verified up to degree 10"));
    let out = regquot(&[job.to_str().unwrap(), "--window", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
