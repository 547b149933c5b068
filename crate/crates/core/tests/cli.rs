use std::path::Path;
use std::process::{Command, Output};

use klvwb::datum::{builtin_datum, builtin_names, CaseDescriptor};

fn klvwb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klvwb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// sl2-T with the ascent from p0 to wt removed.
fn write_broken(dir: &Path) -> String {
    let mut datum = builtin_datum("sl2-T").unwrap();
    let p0 = datum.find_param("p0").unwrap();
    datum.set_action(0, p0, Some(CaseDescriptor::CompactG));
    let path = dir.join("broken.json");
    std::fs::write(&path, datum.to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn klv_csv_for_sl2_t() {
    let o = klvwb(&["klv", "--builtin", "sl2-T", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "p0,wt,1"));
    let ws: Vec<&str> = out
        .lines()
        .filter(|l| l.split(',').nth(1) == Some("ws"))
        .collect();
    assert_eq!(ws, ["ws,ws,1"]);
}

#[test]
fn check_passes_on_a2() {
    let o = klvwb(&["check", "--builtin", "hecke-regular:A2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("result: PASS\n"));
}

#[test]
fn broken_datum_fails_reachability() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_broken(dir.path());
    let o = klvwb(&["validate", "--datum", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("thm-order-reachability: FAIL"));

    let o = klvwb(&["check", "--datum", &path]);
    assert_eq!(o.status.code(), Some(1));
    let o = klvwb(&["klv", "--datum", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("thm-order-reachability"));
}

#[test]
fn malformed_json_is_a_datum_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"name\": \"x\",\n  \"coxeter\": }").unwrap();
    let o = klvwb(&["validate", "--datum", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn json_mirrors_csv() {
    for cmd in ["klv", "validate", "ext"] {
        let csv = stdout(&klvwb(&[cmd, "--builtin", "sl2-N", "--format", "csv"]));
        let json: Vec<serde_json::Map<String, serde_json::Value>> =
            serde_json::from_str(&stdout(&klvwb(&[
                cmd,
                "--builtin",
                "sl2-N",
                "--format",
                "json",
            ])))
            .unwrap();
        let mut lines = csv.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), json.len(), "{cmd}");
        for obj in &json {
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            let mut sorted = header.clone();
            sorted.sort();
            assert_eq!(keys, sorted, "{cmd}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    for name in builtin_names().iter().filter(|n| !n.ends_with("D4")) {
        let args = [
            "ext",
            "--builtin",
            name.as_str(),
            "--format",
            "csv",
            "--window",
            "4",
        ];
        assert_eq!(klvwb(&args).stdout, klvwb(&args).stdout, "{name}");
    }
}

#[test]
fn list_builtins() {
    let out = stdout(&klvwb(&["list-builtins"]));
    assert_eq!(out.lines().collect::<Vec<_>>(), builtin_names());
}
