//! The command line end to end, through the library entry point and the binary.

use std::process::Command;

use finsler_cli::execute;
use serde_json::Value;

const REFERENCE: [&str; 10] = [
    "finsler",
    "--dim",
    "3",
    "--coords",
    "x1,x2,x3",
    "--fibers",
    "y1,y2,y3",
    "--metric-function",
    "x3*y1^3/y2 + y3^2",
    "--constraints=x3>0,y1>0,y2>0",
];

fn reference(extra: &[&str]) -> Vec<String> {
    REFERENCE.iter().chain(extra).map(|s| s.to_string()).collect()
}

#[test]
fn metric_table_lists_four_orbit_representatives() {
    let out = execute(reference(&["--objects", "g"]), None);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().skip(1).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "g_{x1 x1} = 3*x3*y1/y2");
    assert!(lines.contains(&"g_{x3 x3} = 1"));
}

#[test]
fn full_table_lists_both_off_diagonal_entries() {
    let out = execute(reference(&["--objects", "g", "--full-table"]), None);
    assert_eq!(out.stdout.lines().skip(1).count(), 5);
    assert!(out.stdout.contains("g_{x2 x1} = "));
}

#[test]
fn vanishing_v_curvature_is_reported_as_such() {
    let out = execute(reference(&["--objects", "S:cartan"]), None);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("no nonvanishing components"));
}

#[test]
fn latex_uses_coordinate_names_in_the_labels() {
    let out = execute(reference(&["--objects", "Cmixed", "--format", "latex"]), None);
    assert!(out.stdout.lines().any(|l| l == "C^{x1}_{x1 x1} = -\\frac{1}{y1}"), "{}", out.stdout);
}

#[test]
fn json_follows_the_documented_schema() {
    let out = execute(reference(&["--objects", "C", "--format", "json"]), None);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["name"], "C");
    assert_eq!(v["signature"], serde_json::json!(["down", "down", "down"]));
    assert_eq!(v["dim"], 3);
    assert_eq!(v["coords"], serde_json::json!(["x1", "x2", "x3"]));
    assert_eq!(v["symmetry_reduced"], true);
    let first = &v["components"][0];
    assert_eq!(first["index"], serde_json::json!(["x1", "x1", "x1"]));
    assert_eq!(first["expr"], "3*x3/(2*y2)");
}

#[test]
fn zero_tensor_json_has_no_components() {
    let argv = ["finsler", "--dim", "2", "--metric-function", "y1^2+y2^2", "--objects", "C", "--format", "json"];
    let v: Value = serde_json::from_str(&execute(argv, None).stdout).unwrap();
    assert_eq!(v["components"], serde_json::json!([]));
}

#[test]
fn berwald_example_passes_verification_with_a_zero_hv_curvature() {
    let argv = [
        "finsler",
        "--dim",
        "4",
        "--metric-function",
        "x1*y4*sqrt(y1^2+y2^2+y3^2)",
        "--constraints",
        "x1>0,y4>0",
        "--objects",
        "P:cartan,classify",
        "--check",
        "points=8,tol=1e-9,seed=1",
    ];
    let out = execute(argv, None);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("no nonvanishing components"));
    assert!(out.stdout.contains("berwaldian = true"));
    assert_eq!(out.stdout.matches("check: pass").count(), 2);
}

#[test]
fn given_f_is_squared_before_computing() {
    let via_f = execute(["finsler", "--dim", "2", "--given-f", "sqrt(y1^2+x1^2*y2^2)", "--objects", "g"], None);
    let via_f2 = execute(["finsler", "--dim", "2", "--metric-function", "y1^2+x1^2*y2^2", "--objects", "g"], None);
    assert_eq!(via_f.code, 0);
    assert_eq!(via_f.stdout, via_f2.stdout);
}

#[test]
fn custom_names_appear_in_labels_and_expressions() {
    let out = execute(["finsler", "--coords", "r,t", "--fibers", "u,v", "--metric-function", "u^2+r^2*v^2", "--objects", "Gamma"], None);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("Gamma^{r}_{t t} = -r"), "{}", out.stdout);
}

#[test]
fn lower_simplify_displays_the_same_components() {
    let cubic = ["finsler", "--dim", "3", "--given-f", "(x1*y2^3+y1^2*y3)^(1/3)", "--constraints", "x1>0,y1>0,y2>0,y3>0", "--objects", "S:cartan,P:cartan"];
    let direct = execute(cubic, None);
    let lowered = execute(cubic.iter().chain(&["--lower-simplify"]), None);
    assert_eq!(lowered.code, 0, "{}", lowered.stderr);
    assert_eq!(direct.stdout, lowered.stdout);
}

#[test]
fn validation_errors_exit_with_one() {
    let cases: [&[&str]; 6] = [
        &["finsler", "--dim", "2", "--objects", "g"],
        &["finsler", "--dim", "2", "--metric-function", "y1^2+y2^2", "--objects", "torsion"],
        &["finsler", "--dim", "2", "--metric-function", "y1^2+y2^2", "--objects", "S:chern"],
        &["finsler", "--dim", "2", "--metric-function", "y1^3+y2^2", "--objects", "g"],
        &["finsler", "--coords", "a,a", "--metric-function", "y1^2+y2^2", "--objects", "g"],
        &["finsler", "--dim", "2", "--no-such-flag"],
    ];
    for argv in cases {
        let out = execute(argv.iter().copied(), None);
        assert_eq!(out.code, 1, "{argv:?}: {}", out.stdout);
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn a_failed_check_exits_with_two() {
    // an unattainable tolerance forces a failure
    let out = execute(reference(&["--objects", "C", "--check", "points=2,tol=1e-300,box=1:2"]), None);
    assert_eq!(out.code, 2, "{}", out.stdout);
    assert!(out.stdout.contains("check: FAIL"));
}

#[test]
fn seed_variable_overrides_the_check_seed() {
    let argv = reference(&["--objects", "g", "--check", "seed=5", "--format", "json"]);
    let out = execute(argv.clone(), Some("77"));
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["check"]["seed"], 77);
    assert_eq!(execute(argv, Some("minus one")).code, 1);
}

#[test]
fn config_file_supplies_keys_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("finsler-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.conf");
    std::fs::write(&path, "# polar plane\ndim = 2\nmetric-function = \"y1^2 + x1^2*y2^2\"\nobjects = g\nformat = json\n").unwrap();
    let path = path.to_str().unwrap();
    let from_file: Value = serde_json::from_str(&execute(["finsler", "--config", path], None).stdout).unwrap();
    assert_eq!(from_file["components"][1]["expr"], "x1^2");
    let overridden = execute(["finsler", "--config", path, "--format", "text"], None);
    assert!(overridden.stdout.starts_with("# g\n"));
    assert_eq!(execute(["finsler", "--config", "/nonexistent/finsler.conf"], None).code, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_finsler"))
            .args(&reference(&["--objects", "g,Gberwald,R:hashiguchi", "--format", "json", "--check", "seed=3"])[1..])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}
