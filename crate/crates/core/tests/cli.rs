use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn detvar(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_detvar"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, stdout, stderr) = detvar(args);
    assert_eq!(code, 0, "{stderr}");
    serde_json::from_str(&stdout).unwrap()
}

#[test]
fn schmidt_fixtures() {
    let bell = json(&["schmidt", &fixture("bell.json")]);
    assert_eq!(
        (bell["d"].as_u64(), bell["v0_dim"].as_str()),
        (Some(2), Some("EMPTY"))
    );
    let prod = json(&["schmidt", &fixture("product_3x3.json")]);
    assert_eq!(
        (prod["d"].as_u64(), prod["v0_dim"].as_u64()),
        (Some(1), Some(1))
    );
    let three = json(&["schmidt", &fixture("schmidt3_4x4.json")]);
    assert_eq!(
        (three["d"].as_u64(), three["v0_dim"].as_u64()),
        (Some(3), Some(0))
    );
}

#[test]
fn covariance_on_rank_two_state() {
    let rep = json(&[
        "covariance",
        &fixture("rank2_2x3.json"),
        "--k",
        "1",
        "--samples",
        "500",
    ]);
    let agree = rep["agree"].as_u64().unwrap();
    let near = rep["near_threshold"].as_u64().unwrap();
    assert_eq!(agree + near, 500);
    assert_eq!(rep["disagree"], 0);
}

#[test]
fn minors_omit_zero_polynomials() {
    let rep = json(&["minors", &fixture("padded_2x3.json"), "--k", "1"]);
    // Rows {0,2} and {1,2} of the 3x3 pencil contain the zero row.
    assert_eq!(rep["zero_omitted"], 6);
    assert_eq!(rep["minors"], 3);
    assert_eq!(rep["polys"].as_array().unwrap().len(), 3);
}

#[test]
fn linearity_verdicts() {
    let sep = json(&["linearity", &fixture("separable_2x2.json"), "--k", "1"]);
    assert_eq!(sep["verdict"], "ConsistentWithSeparable");
    assert_eq!(sep["structure"]["violations"].as_array().unwrap().len(), 0);
    let conic = json(&["linearity", &fixture("conic_3x2.json"), "--k", "1"]);
    assert_eq!(conic["verdict"], "NonlinearVarietyWitness");
    assert!(conic["witness"]["certificate"].as_array().unwrap().len() >= 3);
    let ppt = json(&["ppt", &fixture("conic_3x2.json")]);
    assert_eq!(ppt["verdict"], "NPT");
}

#[test]
fn ppt_fixtures() {
    let bell = json(&["ppt", &fixture("bell.json")]);
    assert_eq!(bell["verdict"], "NPT");
    assert!((bell["min_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-12);
    let mm = json(&["ppt", &fixture("maximally_mixed_2x3.json")]);
    assert_eq!(mm["verdict"], "PPT");
    assert!((mm["min_eigenvalue"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn membership_and_slice_read_json_arguments() {
    let point = fixture("point_e2.json");
    let rep = json(&[
        "membership",
        &fixture("maximally_mixed_2x3.json"),
        "--point",
        r#"{"coords":[[1,0],[0,1]]}"#,
        "--k",
        "2",
    ]);
    assert_eq!(rep["member"], false);
    let (code, _, stderr) = detvar(&[
        "membership",
        &fixture("product_3x3.json"),
        "--point",
        &point,
    ]);
    assert_eq!(code, 0, "{stderr}");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("slice.csv");
    let (code, _, stderr) = detvar(&[
        "slice",
        &fixture("maximally_mixed_2x3.json"),
        "--line",
        &fixture("line_2.json"),
        "--samples",
        "11",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stderr}");
    let csv = std::fs::read_to_string(out).unwrap();
    assert_eq!(csv.lines().count(), 12);
    for line in csv.lines().skip(1) {
        let min: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((min - 1.0 / 6.0).abs() < 1e-12);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(detvar(&["nonsense", "x"]).0, 2);
    assert_eq!(detvar(&["ppt", "/no/such/file.json"]).0, 2);
    assert_eq!(
        detvar(&["schmidt", &fixture("maximally_mixed_2x3.json")]).0,
        2
    );
    assert_eq!(detvar(&["minors", &fixture("bell.json"), "--k", "5"]).0, 2);
    assert_eq!(
        detvar(&["covariance", &fixture("bell.json"), "--rel-eps", "1"]).0,
        2
    );
}
