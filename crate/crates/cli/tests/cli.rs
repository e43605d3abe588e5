use std::process::Command;

fn entcert() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_entcert"));
    c.env_remove("ENTCERT_SEED").env_remove("ENTCERT_CACHE");
    c
}

#[test]
fn unknown_claim_is_usage_error() {
    let out = entcert().args(["claims", "--claims", "eq7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("eq7") && err.contains("eq11"), "{err}");
}

#[test]
fn negative_tolerance_is_usage_error() {
    let out = entcert().args(["claims", "--claims", "eq6", "--tol=-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_parses() {
    let out = entcert()
        .args(["claims", "--claims", "eq6,distill-1-9", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["eq6", "distill-1-9"]);
    assert!(v.as_array().unwrap().iter().all(|r| r["status"] == "pass"));
}

#[test]
fn text_report_to_file_with_env_seed_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let cache = dir.path().join("cache");
    std::fs::create_dir(&cache).unwrap();
    let out = entcert()
        .env("ENTCERT_SEED", "7")
        .env("ENTCERT_CACHE", &cache)
        .args(["claims", "--claims", "lemma", "--out"])
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&report).unwrap();
    assert!(body.contains("PASS   lemma"));
    assert!(body.ends_with("1/1 claims pass\n"));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
}

#[test]
fn state_info_table() {
    let out = entcert().args(["state", "w", "--info"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dims [2, 2, 2]"));
    for cut in ["A|BC", "B|AC", "C|AB"] {
        let line = text.lines().find(|l| l.starts_with(cut)).unwrap();
        assert!(line.contains("0.9182958341") && line.trim_end().ends_with("no"), "{line}");
    }
}

#[test]
fn state_amplitudes_and_bad_kind() {
    let out = entcert().args(["state", "ghz"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("  [")).count(), 2);
    let bad = entcert().args(["state", "bell"]).output().unwrap();
    assert!(!bad.status.success());
}
