use std::process::{Command, Output};

fn f2coh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_f2coh"))
        .args(args)
        .output()
        .expect("spawn f2coh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = f2coh(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn space_series() {
    let v = json(&["space", "G2_SO4", "--format", "json"]);
    assert_eq!(v["series"], serde_json::json!([1, 0, 1, 1, 1, 1, 1, 0, 1]));
    let v = json(&["space", "Sphere(3)", "--format", "json"]);
    assert_eq!(v["series"][3], 1);
    assert_eq!(v["presentation"]["relations"], serde_json::json!(["s^2"]));
}

#[test]
fn total_zeta_2_with_ring() {
    let v = json(&["total", "zeta_2", "--ring", "--format", "json"]);
    let totals: Vec<u64> = v["totals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(
        &totals[..17],
        &[1, 0, 1, 1, 0, 2, 1, 1, 2, 1, 1, 2, 0, 1, 1, 0, 1]
    );
    assert_eq!(totals.iter().sum::<u64>(), 16);
    assert!(v["ring"]["presentation"].is_object());
}

#[test]
fn total_from_base_and_fiber() {
    let o = f2coh(&["total", "--base", "point", "--fiber", "S3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("totals (degrees 0..3): 1,0,0,1"));
}

#[test]
fn total_with_explicit_seed() {
    let o = f2coh(&[
        "total", "--base", "S6", "--fiber", "S3", "--seed", "z=0", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(
        v["totals"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|x| x.as_u64() == Some(1))
            .count(),
        4
    );
}

#[test]
fn total_markdown_lists_representatives() {
    let o = f2coh(&["total", "rho1", "--format", "md"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("| degree | dim | representatives |"));
}

#[test]
fn undetermined_bundle_fails() {
    let o = f2coh(&["total", "rho3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rho3"));
}

#[test]
fn index_rho1() {
    let v = json(&["index", "rho1", "--format", "json"]);
    assert_eq!(v["generators"], serde_json::json!(["t^3 + u3 + u2*t"]));
    assert_eq!(v["bound"], 12);
}

#[test]
fn index_phi_1() {
    let v = json(&["index", "phi_1", "--format", "json"]);
    assert_eq!(v["generators"].as_array().unwrap().len(), 1);
    assert_eq!(v["hilbert"][4], 1);
}

#[test]
fn index_free_sphere() {
    let v = json(&["index", "free-sphere", "--k", "3", "--format", "json"]);
    assert_eq!(v["generators"], serde_json::json!(["t^3"]));
}

#[test]
fn index_against() {
    let o = f2coh(&["index", "rho1", "--against", "u3 + u2*t + t^3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("equal to given ideal: true"));
    let o = f2coh(&["index", "rho1", "--against", "t^3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(f2coh(&["space", "nope"]).status.code(), Some(2));
    assert_eq!(f2coh(&["total", "nope"]).status.code(), Some(2));
    assert_eq!(
        f2coh(&["verify", "--subset", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(f2coh(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn spec_file() {
    let dir = std::env::temp_dir().join(format!("f2coh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bundle.json");
    std::fs::write(
        &path,
        r#"{"base": "G2_SO4", "fiber": {"spheres": [2]}, "sw": [["1", "u2", "u3"]],
            "group": {"rank": 1, "actions": [{"antipodal": 0}]}}"#,
    )
    .unwrap();
    let v = json(&[
        "index",
        "--spec",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(v["generators"], serde_json::json!(["t^3 + u3 + u2*t"]));
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(
        f2coh(&["total", "--spec", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_catalog_subset() {
    let o = f2coh(&["verify", "--subset", "catalog"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn catalog_list() {
    let v = json(&["catalog", "list", "--format", "json"]);
    assert!(v["bundle_names"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x == "rho1"));
}
