use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn biplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biplane")).args(args).env_remove("BIPLANE_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn built(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let o = biplane(&["catalog", "build", name, "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const GROUP: &str = r#"{"degree":16,"generators":["(2,4,3)(5,13,9)(6,16,11)(7,14,12)(8,15,10)","(2,6,5)(3,11,9)(4,16,13)(7,12,14)(8,15,10)","(2,6)(3,11)(4,16)(7,15)(8,12)(10,14)","(3,5)(4,6)(11,13)(12,14)","(1,2)(3,4)(5,6)(7,8)(9,10)(11,12)(13,14)(15,16)"]}"#;
const CD: &str = r#"{"partitions":[[[1,8,10,15],[2,7,9,16],[3,6,12,13],[4,5,11,14]],[[1,7,12,14],[2,8,11,13],[3,5,10,16],[4,6,9,15]]]}"#;

#[test]
fn verify_catalog_designs() {
    let dir = TempDir::new().unwrap();
    for name in
        ["fano_complement", "hadamard11", "biplane16_primitive", "biplane16_c2c8", "biplane16_q8c2", "biplane37_qr"]
    {
        let p = built(dir.path(), name);
        let o = biplane(&["verify", s(&p)]);
        assert_eq!(code(&o), 0, "{name}");
        assert!(stdout(&o).starts_with("ok:"));
    }
}

#[test]
fn verify_failure_exits_one() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"v":7,"k":4,"lambda":2,"blocks":[[1,2,3,4],[1,2,5,6],[1,3,5,7],[1,4,6,7],[2,3,6,7],[2,4,5,7],[2,3,4,7]]}"#,
    )
    .unwrap();
    let o = biplane(&["verify", s(&p)]);
    assert_eq!(code(&o), 1);
    let o = biplane(&["--json", "verify", s(&p)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"v":7,"k":4,"lambda":2,"blocks":[[0,1,2,3]]}"#).unwrap();
    assert_eq!(code(&biplane(&["verify", s(&p)])), 2);
    assert_eq!(code(&biplane(&["verify", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&biplane(&["frobnicate"])), 2);
    assert_eq!(code(&biplane(&["verify", s(&p), "--no-such-flag"])), 2);
    assert_eq!(code(&biplane(&["ds", "search", "--group", "d8", "--k", "3", "--lambda", "1"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_biplane"))
        .args(["catalog", "list"])
        .env("BIPLANE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn aut_json_shape() {
    let dir = TempDir::new().unwrap();
    let p = built(dir.path(), "fano_complement");
    let o = biplane(&["aut", s(&p), "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 168);
    assert!(v["generators"].as_array().unwrap().iter().all(|g| g.as_str().unwrap().starts_with('(')));
    assert_eq!(v.as_object().unwrap().len(), 2);
}

#[test]
fn three_sixteen_point_classes() {
    let dir = TempDir::new().unwrap();
    let names = ["biplane16_primitive", "biplane16_c2c8", "biplane16_q8c2"];
    let paths: Vec<PathBuf> = names.iter().map(|n| built(dir.path(), n)).collect();
    let mut certs = std::collections::BTreeSet::new();
    for i in 0..3 {
        for j in 0..3 {
            let o = biplane(&["--json", "iso", s(&paths[i]), s(&paths[j])]);
            assert_eq!(code(&o), 0);
            let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
            assert_eq!(v["isomorphic"], i == j);
            certs.insert(v["certificates"][0].as_str().unwrap().to_string());
        }
    }
    assert_eq!(certs.len(), 3);
}

#[test]
fn dual_round_trip() {
    let dir = TempDir::new().unwrap();
    let p = built(dir.path(), "biplane16_q8c2");
    let out = dir.path().join("dual.json");
    assert_eq!(code(&biplane(&["dual", s(&p), "-o", s(&out)])), 0);
    let o = biplane(&["iso", s(&p), s(&out)]);
    assert!(stdout(&o).starts_with("isomorphic     yes"));
}

#[test]
fn lander_and_cert121() {
    let o = biplane(&["ds", "lander", "--v", "121", "--k", "16", "--lambda", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("witness (11,2,5)"));
    let o = biplane(&["cert121", "--order", "16"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no admissible cycle types"));
    let o = biplane(&["--json", "cert121"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sylow_product"], 5_765_760);
    assert_eq!(code(&biplane(&["cert121", "--order", "6"])), 2);
}

#[test]
fn ds_search_and_develop() {
    let o = biplane(&["--json", "ds", "search", "--group", "c2xc8", "--k", "6", "--lambda", "2"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
    assert_eq!(v["distinct_designs"], 2);

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("qr.json");
    let o = biplane(&["ds", "develop", "--group", "c11", "--set", "1,3,4,5,9", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    let h = built(dir.path(), "hadamard11");
    assert!(stdout(&biplane(&["iso", s(&out), s(&h)])).starts_with("isomorphic     yes"));
    assert_eq!(code(&biplane(&["ds", "develop", "--group", "c11", "--set", "1,2,3,4,5"])), 1);
    assert_eq!(code(&biplane(&["ds", "search", "--group", "c121ab", "--k", "16", "--lambda", "2"])), 1);
}

#[test]
fn fix_sweep_and_single_element() {
    let dir = TempDir::new().unwrap();
    let p = built(dir.path(), "biplane16_primitive");
    let o = biplane(&["--json", "fix", "--design", s(&p), "--all"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["elements"], 11519);
    assert_eq!(v["fail"], 0);

    let g = dir.path().join("g.json");
    std::fs::write(&g, GROUP).unwrap();
    let o = biplane(&["fix", "--design", s(&p), "--perm", "(3,5)(4,6)(11,13)(12,14)", "--group", s(&g)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("conj-3u"));
    // not an automorphism
    assert_eq!(code(&biplane(&["fix", "--design", s(&p), "--perm", "(1,2)"])), 2);
}

#[test]
fn cartesian_example() {
    let dir = TempDir::new().unwrap();
    let p = built(dir.path(), "biplane16_primitive");
    let (g, cd) = (dir.path().join("g.json"), dir.path().join("cd.json"));
    std::fs::write(&g, GROUP).unwrap();
    std::fs::write(&cd, CD).unwrap();
    let o = biplane(&["--json", "cart", "verify", "--design", s(&p), "--cd", s(&cd), "--group", s(&g)]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["decomposition"]["homogeneous"], true);
    assert_eq!(v["block_pairs"]["per_block"], 6);
    assert_eq!(v["block_pairs"]["all_blocks"], true);
    assert_eq!(v["group"]["preserves"], true);
    assert_eq!(v["group"]["flag_orbits"], 1);
    assert_eq!(v["preserved_by_aut"], false);
}

#[test]
fn pell_psp4_feasible() {
    let o = biplane(&["--json", "pell", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let xy: Vec<(String, String)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["x"].as_str().unwrap().to_string(), r["y"].as_str().unwrap().to_string()))
        .collect();
    let want = [("1", "1"), ("2", "5"), ("4", "11"), ("11", "31"), ("23", "65")];
    for (got, want) in xy.iter().zip(want) {
        assert_eq!((got.0.as_str(), got.1.as_str()), want);
    }
    for q in ["4", "8", "16", "32"] {
        assert_eq!(code(&biplane(&["psp4", "--q", q])), 0, "q={q}");
    }
    assert_eq!(code(&biplane(&["psp4", "--q", "6"])), 2);
    let o = biplane(&["--json", "feasible", "brc", "--v", "67", "--k", "12", "--lambda", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["feasible"], false);
    assert_eq!(v["agree"], true);
    let o = biplane(&["feasible", "params", "--k", "16"]);
    assert!(stdout(&o).contains("(121,16,2)"));
}

#[test]
fn catalog_list_and_unavailable() {
    let o = biplane(&["--json", "catalog", "list"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 9);
    let o = biplane(&["catalog", "build", "biplane79"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no construction"));
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = ["--json", "ds", "search", "--group", "q8xc2", "--k", "6", "--lambda", "2"];
    let one = biplane(&args);
    for t in ["2", "4"] {
        let o = Command::new(env!("CARGO_BIN_EXE_biplane")).args(args).env("BIPLANE_THREADS", t).output().unwrap();
        assert_eq!(o.stdout, one.stdout);
    }
}
