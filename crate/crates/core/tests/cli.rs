use std::path::PathBuf;

use serde_json::Value;
use tdopt::cli::run;

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tdopt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn tdopt(args: &[&str]) -> tdopt::cli::Output {
    run(std::iter::once("tdopt").chain(args.iter().copied()))
}

const WORKED: &str = "5 5\n1 1 1 1 1\n2 1 1 1 1\n1 2 1 1 1\n1 1 2 1 1\n1 1 1 2 1\n";
const TRIANGLE: &str = "2 3\n1 0 1\n0 1 1\n";

#[test]
fn analyze_reports_all_quantities() {
    let p = temp_file("worked.txt", WORKED);
    let out = tdopt(&["analyze", p.to_str().unwrap(), "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["td_dual"]["value"], 5);
    assert_eq!(v["ec"], 2);
    assert_eq!(v["bd"]["value"], 1);
    assert_eq!(v["bd"]["exact"], true);
}

#[test]
fn transform_round_trips_through_verify() {
    let p = temp_file("tri.txt", TRIANGLE);
    let out = tdopt(&["transform", p.to_str().unwrap(), "--depth", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let again = tdopt(&["transform", p.to_str().unwrap(), "--depth", "2"]);
    assert_eq!(out.stdout, again.stdout, "output must be deterministic");

    let artifact = temp_file("tri.json", &out.stdout);
    let ok = tdopt(&["verify", artifact.to_str().unwrap()]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);

    let mut v: Value = serde_json::from_str(&out.stdout).unwrap();
    v["B"][0][0] = Value::String("7".into());
    let tampered = temp_file("tri-bad-b.json", &v.to_string());
    let bad = tdopt(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("FAIL B·A = A'"));
}

#[test]
fn tampered_leaf_map_is_rejected() {
    // Two independent columns forced onto one leaf of a one-edge star branch.
    let artifact = r#"{"kind":"decomposition","matrix":[["1","0"],["0","1"]],
        "decomposition":{"parents":[null,0,0],"root":0,"leaf_map":{"0":1,"1":1}}}"#;
    let p = temp_file("bad-leaf.json", artifact);
    let out = tdopt(&["verify", p.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("FAIL rank inequality"));
    let good = artifact.replace(r#""1":1}"#, r#""1":2}"#);
    let p = temp_file("good-leaf.json", &good);
    assert_eq!(tdopt(&["verify", p.to_str().unwrap()]).code, 0);
}

#[test]
fn exceeded_depth_exit_code() {
    let p = temp_file("tri2.txt", TRIANGLE);
    let out = tdopt(&["transform", p.to_str().unwrap(), "--depth", "1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("exceeds 1"));
}

#[test]
fn parse_and_size_limit_exit_codes() {
    let p = temp_file("garbage.txt", "2 2\n1 2 3\n");
    assert_eq!(tdopt(&["transform", p.to_str().unwrap(), "--depth", "1"]).code, 3);
    let id: String = (0..8)
        .map(|i| (0..8).map(|j| if i == j { "1 " } else { "0 " }).collect::<String>() + "\n")
        .collect();
    let p = temp_file("id8.txt", &format!("8 8\n{id}"));
    let out = tdopt(&["transform", p.to_str().unwrap(), "--depth", "2", "--mode", "exact"]);
    assert_eq!(out.code, 4);
    let out = tdopt(&["transform", p.to_str().unwrap(), "--depth", "2", "--max-rank", "8"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
}

#[test]
fn solve_modes_and_oracle() {
    let inst = r#"{"A":[["1","1"]],"b":["3"],"l":[0,0],"u":[3,3],
        "objective":[{"kind":"quadratic","a":"1","c":"0"},{"kind":"quadratic","a":"1","c":"0"}]}"#;
    let p = temp_file("toy.json", inst);
    let mut values = Vec::new();
    for mode in ["exact", "heuristic", "none"] {
        let out = tdopt(&["solve", p.to_str().unwrap(), "--mode", mode, "--oracle"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["oracle"]["agree"], true);
        values.push(v["value"].clone());
    }
    assert!(values.iter().all(|v| v == "5"));

    let infeasible = inst.replace(r#""b":["3"]"#, r#""b":["9"]"#);
    let p = temp_file("toy-infeasible.json", &infeasible);
    let out = tdopt(&["solve", p.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.contains("\"status\":\"infeasible\""));
}
