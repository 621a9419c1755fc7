use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_skeinlab"));
    cmd.args(args).current_dir(root()).env_remove("SKEINLAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read(rel: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(root().join(rel)).unwrap()).unwrap()
}

fn assert_valid(schema: &str, doc: &Value) {
    let compiled = JSONSchema::compile(&read(&format!("schemas/{schema}.schema.json"))).unwrap();
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema}: {msgs:?}");
}

const TWIST: [&str; 9] = ["detect", "--genus", "1", "--N", "5", "--curve", "0,1", "--phi", "[[1,1],[0,1]]"];

#[test]
fn surface_info_counts() {
    let v = json_of(&["surface", "info", "--genus", "1"]);
    assert_eq!((v["faces"].as_u64(), v["edges"].as_u64()), (Some(3), Some(5)));
    assert_valid("surface-info", &v);
    for g in 1..=3u64 {
        let v = json_of(&["surface", "info", "--genus", &g.to_string()]);
        assert_eq!(v["faces"].as_u64(), Some(4 * g - 1));
        assert_eq!(v["eulerCharacteristic"].as_i64(), Some(1 - 2 * g as i64));
        assert_eq!(v["boundaryArcs"].as_u64(), Some(1));
    }
}

#[test]
fn exported_triangulation_round_trips() {
    let t = json_of(&["surface", "export", "--genus", "2"]);
    assert_valid("triangulation", &t);
    let dir = std::env::temp_dir().join(format!("skeinlab-tri-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("t.json");
    std::fs::write(&file, t.to_string()).unwrap();
    let info = json_of(&["surface", "info", "--file", file.to_str().unwrap()]);
    assert_eq!(info, json_of(&["surface", "info", "--genus", "2"]));
}

#[test]
fn lattice_info_matches_power_law() {
    for (g, n) in [(1u32, 3u64), (1, 5), (2, 3)] {
        let v = json_of(&["lattice", "info", "--genus", &g.to_string(), "--N", &n.to_string()]);
        assert_valid("lattice-info", &v);
        assert_eq!(v["piDegreeReduced"].as_u64(), Some(n.pow(3 * g - 1)));
        assert_eq!(v["indexOK"], Value::Bool(true));
        assert_eq!(v["eqK0Match"], Value::Bool(true));
    }
}

#[test]
fn refined_report_is_emitted() {
    for n in ["3", "5"] {
        let v = json_of(&["lattice", "refined", "--genus", "1", "--N", n]);
        assert_valid("refined-report", &v);
        let square = v["indexIsTargetSquare"].as_bool().unwrap();
        assert_eq!(square, !v["piDegreeAsserted"].is_null());
    }
}

#[test]
fn qtorus_commands() {
    let v = json_of(&["qtorus", "irrep", "--genus", "1", "--N", "3"]);
    assert_valid("qtorus-irrep", &v);
    assert_eq!(v["dimension"].as_u64(), Some(9));
    assert_eq!(v["ok"], Value::Bool(true));
    let f = json_of(&["qtorus", "frobenius", "--N", "5", "--a", "1,-1,0,2,0"]);
    assert_valid("qtorus-frobenius", &f);
    assert_eq!(f["equal"], Value::Bool(true));
}

#[test]
fn qtrace_reports_support() {
    let v = json_of(&["qtrace", "--curve", "1,2", "--N", "5", "--brute"]);
    assert_valid("qtrace", &v);
    assert_eq!(v["support"]["admissibleStates"].as_u64(), Some(13));
    assert_eq!(v["boundsOK"], Value::Bool(true));
    assert_eq!(v["bruteForceAgrees"], Value::Bool(true));
    let coords = json_of(&["qtrace", "--coords", "2,1,1,2,0"]);
    assert_eq!(coords["curve"], v["curve"]);
}

#[test]
fn orbit_leaf_and_rep_commands() {
    let o = json_of(&["orbit", "--example", "trivial", "--N", "3"]);
    assert_valid("orbit", &o);
    assert_eq!(o["dimension"].as_u64(), Some(27));
    let r = json_of(&["orbit", "--example", "reduced", "--generators", "fixtures/inputs/torus-twists.json", "--points"]);
    assert_valid("orbit", &r);
    assert_eq!(r["points"].as_array().unwrap().len() as u64, r["size"].as_u64().unwrap());
    assert_eq!(r["cell"], "reduced");

    let leaf = json_of(&["leaf", "classify", "--matrix", "[[2,1],[1,1]]", "--second", "[[0,-1],[1,0]]"]);
    assert_valid("leaf-classify", &leaf);
    assert_eq!(leaf["sts"]["kind"], "semisimple");
    let j = json_of(&["leaf", "jacobi"]);
    assert_valid("leaf-jacobi", &j);
    assert_eq!(j["ok"], Value::Bool(true));
    let rm = json_of(&["leaf", "rmatrix"]);
    assert_valid("leaf-rmatrix", &rm);
    assert_eq!(rm["ok"], Value::Bool(true));

    let info = json_of(&["rep", "info", "--rep", "fixtures/inputs/rep-reduced.json"]);
    assert_valid("rep-info", &info);
    assert_eq!(info["cell"], "reduced");
    let lifts = json_of(&["rep", "lifts", "--example", "reduced", "--N", "3"]);
    assert_valid("rep-lifts", &lifts);
    assert_eq!(lifts["lifts"].as_array().unwrap().len(), 3);
    let big = run(&["rep", "lifts", "--example", "trivial", "--N", "3"]);
    assert!(!big.status.success());
    assert!(String::from_utf8_lossy(&big.stderr).contains("reduced cell"));
}

#[test]
fn detect_twist_certified() {
    let v = json_of(&TWIST);
    assert_valid("certificate", &v);
    assert_eq!(v["verdict"], "certified-nontrivial");
    assert_eq!(v["beta"], serde_json::json!([1, 1, 0, 1, 0]));
    assert_eq!(v["reverification"]["ok"], Value::Bool(true));
    assert_eq!(v["assumptions"], serde_json::json!(["delta-liftable"]));
    let id = json_of(&["detect", "--N", "5", "--curve", "0,1", "--phi", "[[1,0],[0,1]]"]);
    assert_valid("certificate", &id);
    assert_eq!(id["verdict"], "inconclusive");
    assert_eq!(id["reasons"], serde_json::json!(["isotopic-curves"]));
}

#[test]
fn detect_output_is_byte_identical_across_threads() {
    let one = run_env(&TWIST, &[("SKEINLAB_THREADS", "1")]);
    let four = run_env(&TWIST, &[("SKEINLAB_THREADS", "4")]);
    let again = run(&TWIST);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, again.stdout);
}

#[test]
fn detect_genus_two_with_config() {
    let args = [
        "detect",
        "--config",
        "fixtures/inputs/config.json",
        "--genus",
        "2",
        "--curve-file",
        "curve-genus2-0_1_0_0.json",
        "--beta",
        "curve-genus2-1_1_0_0.json",
        "--phi-file",
        "twist-alpha1-genus2.json",
    ];
    let v = json_of(&args);
    assert_valid("certificate", &v);
    assert_eq!(v["N"].as_u64(), Some(5));
    assert_eq!(v["verdict"], "certified-nontrivial");
    let wrong = ["detect", "--config", "fixtures/inputs/config.json", "--genus", "2", "--curve-file",
        "curve-genus2-0_1_0_0.json", "--beta", "curve-genus2-0_1_0_0.json", "--phi-file", "twist-alpha1-genus2.json"];
    assert!(!run(&wrong).status.success());
}

#[test]
fn outputs_match_recorded_fixtures() {
    let cases: [(&str, &[&str]); 13] = [
        ("surface-info-g1", &["surface", "info", "--genus", "1"]),
        ("lattice-info-g1-n5", &["lattice", "info", "--genus", "1", "--N", "5"]),
        ("lattice-info-g2-n3", &["lattice", "info", "--genus", "2", "--N", "3"]),
        ("lattice-refined-g1-n3", &["lattice", "refined", "--genus", "1", "--N", "3"]),
        ("detect-twist-n5", &TWIST),
        ("detect-identity-n5", &["detect", "--genus", "1", "--N", "5", "--curve", "0,1", "--phi", "[[1,0],[0,1]]"]),
        ("detect-power4-n3", &["detect", "--genus", "1", "--N", "3", "--curve", "0,1", "--phi", "[[1,4],[0,1]]"]),
        ("detect-ambiguous-n3", &["detect", "--genus", "1", "--N", "3", "--curve", "3,1", "--phi", "[[2,-3],[-1,2]]"]),
        (
            "detect-genus2-n5",
            &["detect", "--config", "fixtures/inputs/config.json", "--genus", "2", "--curve-file",
                "curve-genus2-0_1_0_0.json", "--beta", "curve-genus2-1_1_0_0.json", "--phi-file",
                "twist-alpha1-genus2.json"],
        ),
        ("qtrace-1-2-n5", &["qtrace", "--genus", "1", "--curve", "1,2", "--N", "5"]),
        ("rep-lifts-reduced-n3", &["rep", "lifts", "--example", "reduced", "--N", "3"]),
        ("orbit-reduced-n3", &["orbit", "--example", "reduced", "--N", "3"]),
        ("orbit-trivial-n3", &["orbit", "--example", "trivial", "--N", "3"]),
    ];
    for (name, args) in cases {
        let out = run(args);
        assert!(out.status.success(), "{name}");
        let expected = std::fs::read(root().join(format!("fixtures/expected/{name}.json"))).unwrap();
        assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&expected), "{name}");
    }
}

#[test]
fn recorded_fixtures_validate() {
    let schema_of = |name: &str| match name.split('-').next().unwrap() {
        "surface" => "surface-info",
        "lattice" if name.contains("refined") => "refined-report",
        "lattice" => "lattice-info",
        "detect" => "certificate",
        "qtrace" => "qtrace",
        "rep" => "rep-lifts",
        "orbit" => "orbit",
        other => panic!("no schema for {other}"),
    };
    for entry in std::fs::read_dir(root().join("fixtures/expected")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_str().unwrap().to_string();
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_valid(schema_of(&name), &doc);
    }
    assert_valid("input-rep", &read("fixtures/inputs/rep-reduced.json"));
    assert_valid("input-config", &read("fixtures/inputs/config.json"));
    assert_valid("input-mapping-class", &read("fixtures/inputs/twist-alpha.json"));
    assert_valid("input-mapping-class", &read("fixtures/inputs/twist-alpha1-genus2.json"));
    for m in read("fixtures/inputs/torus-twists.json").as_array().unwrap() {
        assert_valid("input-mapping-class", m);
    }
    for c in ["curve-genus2-0_1_0_0", "curve-genus2-1_1_0_0"] {
        assert_valid("input-curve", &read(&format!("fixtures/inputs/{c}.json")));
    }
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        &["lattice", "info", "--genus", "1", "--N", "4"][..],
        &["detect", "--N", "5", "--phi", "[[1,1],[0,1]]"],
        &["detect", "--N", "5", "--curve", "0,1", "--phi", "[[2,0],[0,1]]"],
        &["qtrace", "--curve", "2,2"],
        &["surface", "info", "--genus", "0"],
        &["bogus"],
    ] {
        let out = run(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn computational_reports_exit_zero() {
    let out = run(&["detect", "--N", "3", "--curve", "3,1", "--phi", "[[2,-3],[-1,2]]"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "inconclusive");
    assert_eq!(v["reasons"], serde_json::json!(["bound-exceeded", "fibers-ambiguous"]));
    let capped = json_of(&["detect", "--N", "5", "--curve", "0,1", "--phi", "[[1,1],[0,1]]", "--cap", "1"]);
    assert_eq!(capped["reasons"], serde_json::json!(["cap-exceeded"]));
}

#[test]
fn timings_only_when_requested() {
    let plain = json_of(&TWIST);
    assert!(plain.get("timings").is_none());
    let mut args = TWIST.to_vec();
    args.push("--timings");
    let timed = json_of(&args);
    assert!(timed["timings"]["totalMs"].is_number());
    assert_valid("certificate", &timed);
}

#[test]
fn selftest_table() {
    let out = run(&["selftest", "--strict"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid("selftest", &v);
    assert_eq!(v["allPassed"], Value::Bool(true));
    assert_eq!(v["criteria"].as_array().unwrap().len(), 11);
    let table = String::from_utf8_lossy(&out.stderr);
    assert_eq!(table.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
    let some = json_of(&["selftest", "--only", "1,9"]);
    assert_eq!(some["criteria"].as_array().unwrap().len(), 2);
}
