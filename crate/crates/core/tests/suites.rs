use serde_json::json;
use stratalab::report::{emit_report, Format, Report, Status};
use stratalab::suite::{run_suite, Suite, SuiteConfig};
use stratalab::weyl::{expected_table, Case};

fn run(s: Suite, p: u32, d: usize, r: usize) -> Report {
    run_suite(&SuiteConfig::new(s, p, d, r, None).unwrap())
}

#[test]
fn weyl_eo_table_section_is_the_golden_table() {
    let r = run(Suite::WeylEo, 3, 1, 1);
    assert!(r.passed());
    assert_eq!(r.tables["quaternionic"], json!(expected_table(Case::Quaternionic)));
    let rows: Vec<&str> = r.tables["quaternionic"].as_array().unwrap().iter().map(|x| x["w"].as_str().unwrap()).collect();
    assert_eq!(rows, ["rho", "s1rho", "s1s2rho", "s1s0rho"]);
}

#[test]
fn dl_partition_over_f3_is_all_xp1() {
    let r = run(Suite::DlPartition, 3, 1, 1);
    assert!(r.passed());
    let c = r.checks.iter().find(|c| c.name == "dl-partition/rationality").unwrap();
    assert_eq!(c.actual, json!({"xp1": 40, "xbw1": 0, "xbw2": 0, "not_in_y": 0}));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for s in [Suite::WeylEo, Suite::BuildingBall, Suite::RzParamodular] {
        let a = emit_report(&run(s, 3, 2, 0), Format::Json);
        let b = emit_report(&run(s, 3, 2, 0), Format::Json);
        assert_eq!(a, b, "{s}");
    }
}

#[test]
fn report_document_shape() {
    let r = run(Suite::DlComponents, 3, 1, 1);
    let v: serde_json::Value = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["checks", "params", "suite", "totals"]);
    let check: Vec<&String> = v["checks"][0].as_object().unwrap().keys().collect();
    assert_eq!(check, ["actual", "elapsed_ms", "expected", "name", "status", "witness"]);
    assert_eq!(v["totals"], json!({"pass": 2, "fail": 0, "skipped": 0}));
    let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
    assert!(text.contains("PASS dl-components/planes: 40"));
    assert!(text.ends_with("totals: 2 pass, 0 fail, 0 skipped\n"));
}

#[test]
fn all_suite_at_small_parameters() {
    // radius 0 keeps the census trivial; d = 1 skips the paramodular model
    let r = run(Suite::All, 3, 1, 0);
    assert!(r.passed(), "{:?}", r.checks.iter().filter(|c| c.status == Status::Fail).collect::<Vec<_>>());
    assert_eq!(r.totals.skipped, 4);
    assert!(r.checks.iter().any(|c| c.name.starts_with("weyl-eo/")));
    assert!(r.checks.iter().filter(|c| c.status == Status::Skipped).all(|c| c.actual.is_string()));
}
