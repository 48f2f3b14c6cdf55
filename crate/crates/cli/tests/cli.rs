use std::process::Command;

fn stratalab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_stratalab")).args(args).output().unwrap()
}

#[test]
fn weyl_eo_json_to_stdout() {
    let out = stratalab(&["weyl-eo", "--p", "3", "--deg", "1", "--radius", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suite"], "weyl-eo");
    assert_eq!(v["totals"]["fail"], 0);
    assert_eq!(v["tables"]["paramodular"].as_array().unwrap().len(), 2);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["elapsed_ms"] == 0));
}

#[test]
fn output_is_deterministic_and_written_to_path() {
    let dir = std::env::temp_dir().join(format!("stratalab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.txt");
    let p = path.to_str().unwrap();
    let args = ["dl-components", "--p", "5", "--format", "text", "--out", p];
    assert_eq!(stratalab(&args).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    assert_eq!(stratalab(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), first);
    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("PASS dl-components/planes: 156"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn envelope_violations_exit_2() {
    for args in [
        vec!["all", "--p", "7"],
        vec!["all", "--deg", "3"],
        vec!["all", "--radius", "3"],
        vec!["all", "--p", "5", "--precision", "20"],
    ] {
        let out = stratalab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).contains("envelope"));
    }
    assert_ne!(stratalab(&["no-such-suite"]).status.code(), Some(0));
}

#[test]
fn timings_flag_records_elapsed() {
    let out = stratalab(&["dl-partition", "--p", "5", "--deg", "2", "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["elapsed_ms"].as_u64().unwrap() > 0));
}
