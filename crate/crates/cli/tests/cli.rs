use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn chromatic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chromatic"))
        .args(args)
        .env_remove("CHROMATIC_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn derive_first_stage_text() {
    let out = chromatic(&["derive", "--p", "3", "--i", "1", "--n", "2"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("t_1^3 v_1 + w_2 = t_1 v_1^3"), "{text}");
}

#[test]
fn derive_is_deterministic_and_cache_is_transparent() {
    let cache = tempfile::tempdir().unwrap();
    let plain = chromatic(&[
        "derive", "--i", "1", "--n", "2", "--m", "2", "--emit", "json",
    ]);
    let args = [
        "derive",
        "--i",
        "1",
        "--n",
        "2",
        "--m",
        "2",
        "--emit",
        "json",
        "--cache-dir",
    ];
    let cold = chromatic(&[&args[..], &[cache.path().to_str().unwrap()]].concat());
    let warm = chromatic(&[&args[..], &[cache.path().to_str().unwrap()]].concat());
    assert_eq!(plain.status.code(), Some(0));
    assert!(
        fs::read_dir(cache.path()).unwrap().next().is_some(),
        "cache stays empty"
    );
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);
    let doc: Value = serde_json::from_slice(&plain.stdout).unwrap();
    assert_eq!(doc["schema"], "chromatic.derivation/v1");
    assert_eq!(doc["module_basis_size"], 9);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["derive", "--p", "4", "--i", "1", "--n", "2"][..],
        &["derive", "--i", "3", "--n", "2"],
        &["derive", "--i", "0", "--n", "2"],
        &["hh", "--algebra", "x.json", "--window", "9..2"],
        &["reproduce", "--fixtures", "no-such-fixture"],
        &["check", "collapse"],
        &["derive", "--bogus"],
    ] {
        let out = chromatic(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn refused_hkr_route_is_a_structured_failure() {
    let path = fixture("cusp.json");
    let out = chromatic(&["hh", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["schema"], "chromatic.error/v1");
    assert!(report["message"].as_str().unwrap().contains("étale"));
}

#[test]
fn hh_compare_on_dual_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture("dual_numbers.json");
    let out = chromatic(&[
        "hh",
        "--algebra",
        path.to_str().unwrap(),
        "--method",
        "bar",
        "--smax",
        "4",
        "--window",
        "0..10",
        "--compare",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let cmp = read_json(&dir.path().join("hh-comparison.json"));
    assert_eq!(cmp["methods"], serde_json::json!(["bar"]));
    let skipped: Vec<&str> = cmp["skipped"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["method"].as_str().unwrap())
        .collect();
    assert_eq!(skipped, ["hkr", "koszul"]);
}

#[test]
fn hh_methods_agree_on_a_free_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture("johnson_wilson_2.json");
    let out = chromatic(&[
        "hh",
        "--algebra",
        path.to_str().unwrap(),
        "--smax",
        "2",
        "--window",
        "0..20",
        "--compare",
        "--emit",
        "csv",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let cmp = read_json(&dir.path().join("hh-comparison.json"));
    assert_eq!(cmp["agree"], true);
    assert!(cmp["methods"].as_array().unwrap().len() >= 2);
    assert!(dir.path().join("hh-hkr.csv").exists());
}

#[test]
fn manifest_records_input_and_output_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture("artin_schreier.json");
    let out = chromatic(&[
        "hh",
        "--algebra",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let manifest = read_json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["schema"], "chromatic.run-manifest/v1");
    let want = hex::encode(Sha256::digest(fs::read(&path).unwrap()));
    assert_eq!(manifest["inputs"][0]["sha256"], want.as_str());
    for output in manifest["outputs"].as_array().unwrap() {
        let bytes = fs::read(dir.path().join(output["name"].as_str().unwrap())).unwrap();
        assert_eq!(
            output["sha256"],
            hex::encode(Sha256::digest(bytes)).as_str()
        );
    }
    let timing = read_json(&dir.path().join("timing.json"));
    assert_eq!(timing["schema"], "chromatic.timing/v1");
}

#[test]
fn collapse_from_a_page_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = chromatic(&[
        "check", "collapse", "--n", "2", "--i", "1", "--emit", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["collapses"], true);
    let mut page = cert["page"].clone();
    page["schema"] = "chromatic.e2-page/v1".into();
    let page_path = dir.path().join("page.json");
    fs::write(&page_path, serde_json::to_vec(&page).unwrap()).unwrap();

    let again = chromatic(&[
        "check",
        "collapse",
        "--page",
        page_path.to_str().unwrap(),
        "--emit",
        "json",
    ]);
    assert_eq!(
        again.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&again.stderr)
    );
    let second: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(second["checks"], cert["checks"]);

    fs::write(&page_path, b"{\"schema\": \"chromatic.e2-page/v1\"}").unwrap();
    let bad = chromatic(&["check", "collapse", "--page", page_path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn e2_splitting_tex_and_text() {
    let tex = chromatic(&["check", "e2-splitting", "--p", "3", "--emit", "tex"]);
    assert_eq!(tex.status.code(), Some(0));
    assert!(stdout(&tex).contains('\\'));
    let text = chromatic(&["check", "e2-splitting", "--p", "3"]);
    assert!(
        stdout(&text).contains("K(0) degrees: {0, 5, 17, 22}"),
        "{}",
        stdout(&text)
    );
}

#[test]
fn conjecture_grid_is_consistent() {
    let out = chromatic(&[
        "check",
        "conjecture",
        "--p",
        "5",
        "--n",
        "3",
        "--emit",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["checks"].as_array().unwrap().len(), 4);
    assert_eq!(doc["consistent"], true);
}

#[test]
fn reproduce_filters() {
    let empty = chromatic(&["reproduce", "--fixtures="]);
    assert_eq!(empty.status.code(), Some(0));
    let some = chromatic(&["reproduce", "--fixtures", "sigma-match,collapse"]);
    assert_eq!(
        some.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&some.stderr)
    );
    let text = stdout(&some);
    assert!(text.contains("sigma-match") && text.contains("collapse"));
    assert!(!text.contains("e2-splitting"));
}
