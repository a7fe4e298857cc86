use std::path::PathBuf;
use std::process::Command;

use gsio_cli::{run, CommandOutcome, EXIT_INPUT, EXIT_OK, EXIT_SOLVER};
use gsio_core::{parse_system, two_stage};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn gsio(args: &[&str]) -> CommandOutcome {
    run(std::iter::once("gsio").chain(args.iter().copied()))
}

fn json(out: &CommandOutcome) -> Value {
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn check_reports_example1_verdict() {
    let v = json(&gsio(&["check", &fixture("example1.json")]));
    assert_eq!(v["overall"], false);
    assert_eq!(v["routes_agree"], true);
    assert_eq!(v["dm"]["s_edge_components"], serde_json::json!([2, 3]));
    assert_eq!(v["digraph"]["offending"], serde_json::json!([2, 3]));
}

#[test]
fn check_single_route() {
    let dm = json(&gsio(&["check", "--method", "dm", &fixture("selfloop_cascade.json")]));
    assert_eq!(dm["overall"], false);
    assert_eq!(dm["dm"]["cond1_no_horizontal"], false);
    assert!(dm["digraph"].is_null());
    let dg = json(&gsio(&["check", "--method", "digraph", &fixture("example1.json")]));
    assert_eq!(dg["overall"], false);
    assert!(dg["dm"].is_null());
}

#[test]
fn place_report_equals_library_serialization() {
    for name in ["example1.json", "chained_cover.json", "selfloop_cascade.json"] {
        let path = fixture(name);
        let sys = parse_system(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let lib = two_stage(&sys).unwrap().to_json();
        assert_eq!(json(&gsio(&["place", &path])), lib, "{name}");
    }
    let chained_cover = json(&gsio(&["place", &fixture("chained_cover.json")]));
    assert_eq!(chained_cover["total"], 6);
    assert_eq!(chained_cover["stages"]["stage1"].as_array().unwrap().len(), 4);
    assert_eq!(chained_cover["stages"]["stage2"].as_array().unwrap().len(), 2);
}

#[test]
fn reduce_then_exact_place() {
    let dir = tempfile::tempdir().unwrap();
    let reduced = gsio(&["reduce", &fixture("example2_setcover.json")]);
    let r = json(&reduced);
    assert_eq!(r["n"], 12);
    let path = write_temp(&dir, "reduced.json", &reduced.stdout);
    let placed = json(&gsio(&["place", "--exact", &path]));
    assert_eq!(placed["total"], 5);
}

#[test]
fn bounds_and_minobs() {
    let b = json(&gsio(&["bounds", &fixture("example1.json")]));
    assert_eq!((b["lower"].as_u64(), b["upper"].as_u64()), (Some(1), Some(2)));
    let d = json(&gsio(&["bounds", "--direct-measure", &fixture("example1.json")]));
    assert!(d["lower"].as_u64() <= d["upper"].as_u64());
    let m = json(&gsio(&["minobs", &fixture("selfloop_cascade.json")]));
    assert!(m["h"].as_u64().unwrap() >= 1);
}

#[test]
fn polycase_on_selfloop_cascade() {
    let p = json(&gsio(&["polycase", &fixture("selfloop_cascade.json")]));
    assert_eq!(p["measured_states"], serde_json::json!([3, 5]));
}

#[test]
fn gen_is_deterministic_and_parseable() {
    let args = ["gen", "--n", "12", "--q", "2", "--density", "0.2", "--dedicated", "--seed", "42"];
    let a = gsio(&args);
    let b = gsio(&args);
    assert_eq!(a, b);
    let sys = parse_system(&a.stdout).unwrap();
    assert_eq!((sys.n(), sys.q()), (12, 2));
    assert!(sys.has_dedicated_inputs());
    let other = gsio(&["gen", "--n", "12", "--q", "2", "--density", "0.2", "--dedicated", "--seed", "43"]);
    assert_ne!(a.stdout, other.stdout);
    assert_eq!(gsio(&["gen", "--n", "3", "--q", "1", "--density", "0.2"]).exit_code, EXIT_INPUT);
}

#[test]
fn dot_exports() {
    let plain = gsio(&["dot", &fixture("example1.json")]);
    assert_eq!(plain.exit_code, EXIT_OK);
    assert!(plain.stdout.starts_with("digraph system"));
    let dm = gsio(&["dot", "--dm", &fixture("example1.json")]);
    assert!(dm.stdout.contains("cluster_b4"));
    assert!(dm.stdout.contains("style=dashed"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(gsio(&["frobnicate"]).exit_code, EXIT_INPUT);
    assert_eq!(gsio(&["check", "/nonexistent/system.json"]).exit_code, EXIT_INPUT);

    let bad = write_temp(&dir, "bad.json", r#"{"n":2,"q":1,"m":0,"A":[[3,1]],"B":[[1,1]],"C":[]}"#);
    let out = gsio(&["check", &bad]);
    assert_eq!(out.exit_code, EXIT_INPUT);
    assert!(out.stderr.contains("outside"), "{}", out.stderr);

    // polycase requires a single dedicated input and self-loops everywhere
    assert_eq!(gsio(&["polycase", &fixture("example1.json")]).exit_code, EXIT_SOLVER);
    assert_eq!(gsio(&["place", "--exact", "--cap", "3", &fixture("chained_cover.json")]).exit_code, EXIT_SOLVER);

    // verdicts are data
    assert_eq!(gsio(&["check", &fixture("example1.json")]).exit_code, EXIT_OK);
    assert_eq!(gsio(&["--help"]).exit_code, EXIT_OK);
}

#[test]
fn verbose_summary_goes_to_stderr() {
    let quiet = gsio(&["check", &fixture("example1.json")]);
    assert!(quiet.stderr.is_empty());
    let loud = gsio(&["check", "-v", &fixture("example1.json")]);
    assert!(loud.stderr.starts_with("GSIO: false"));
    assert_eq!(loud.stdout, quiet.stdout);
}

#[test]
fn binary_matches_library() {
    let out = Command::new(env!("CARGO_BIN_EXE_gsio"))
        .args(["place", &fixture("example1.json")])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), gsio(&["place", &fixture("example1.json")]).stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_gsio")).args(["check"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
}
