use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn metaplectic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metaplectic"))
        .args(args)
        .env_remove("METAPLECTIC_BACKEND")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn manifest_of(path: &Path) -> Value {
    let mut m = path.as_os_str().to_owned();
    m.push(".manifest.json");
    serde_json::from_str(&std::fs::read_to_string(m).unwrap()).unwrap()
}

#[test]
fn verify_prints_both_orders() {
    let v = json(&metaplectic(&[
        "verify",
        "--model",
        "V113_3",
        "--word",
        "BBIFBDAAHFJBAHBHBBJA",
    ]));
    for key in [
        "distance",
        "m11_abs",
        "unitarity_defect",
        "off_block_norm",
        "order_convention",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["backend"], "bigfloat:256");
    assert_eq!(v["orders"].as_array().unwrap().len(), 2);
    assert!(v["orders"]
        .as_array()
        .unwrap()
        .iter()
        .any(|o| o["numerically_zero"] == true));
}

#[test]
fn verify_identity_word_and_bad_letters() {
    let v = json(&metaplectic(&[
        "verify",
        "--model",
        "V133_1",
        "--word",
        "AF",
        "--backend",
        "native64",
    ]));
    assert!((v["distance"].as_f64().unwrap() - 5.0).abs() < 1e-12);
    let bad = metaplectic(&["verify", "--model", "V133_1", "--word", "AQ"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown letter"));
}

#[test]
fn backend_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_metaplectic"))
        .args(["verify", "--model", "V113_3", "--word", "AB"])
        .env("METAPLECTIC_BACKEND", "bigfloat:128")
        .output()
        .unwrap();
    assert_eq!(json(&out)["backend"], "bigfloat:128");
}

#[test]
fn models_list_and_dump() {
    let v = json(&metaplectic(&["models", "list"]));
    let models = v["models"].as_array().unwrap();
    assert_eq!(models.len(), 28);
    assert_eq!(models.iter().filter(|m| m["braidable"] == true).count(), 8);
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
    let d = json(&metaplectic(&["models", "dump", "--model", "V113_3"]));
    assert_eq!(d["z_conjugate"], "V331_1");
    assert!(d["tables"].is_object());
}

#[test]
fn ebm_dump_has_decimal_string_entries() {
    let v = json(&metaplectic(&[
        "ebm", "dump", "--model", "V113_3", "--arity", "2",
    ]));
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 5);
    let first = &gens[0][0][0];
    assert!(first[0].is_string() && first[1].is_string());
    assert_eq!(gens[0].as_array().unwrap().len(), 5);
}

#[test]
fn search_cnot_writes_csv_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.csv");
    let out = metaplectic(&[
        "search-cnot",
        "--model",
        "V131_3",
        "--max-len",
        "7",
        "--top-k",
        "2",
        "--backend",
        "native64",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        [
            "model",
            "length",
            "word",
            "distance",
            "m11_abs",
            "unitarity_defect",
            "backend"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 14);
    let last = &rows[13];
    assert_eq!(&last[1], "7");
    assert!(last[3].parse::<f64>().unwrap() < 1e-30);
    let m = manifest_of(&path);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 1);
    assert_eq!(m["backend"], "native64");
}

#[test]
fn search_budget_exhaustion_exits_with_two() {
    let out = metaplectic(&[
        "search-cnot",
        "--model",
        "V113_3",
        "--max-len",
        "9",
        "--budget",
        "2000",
        "--backend",
        "native64",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("# truncated"));
}

#[test]
fn ga_search_is_reproducible() {
    let args = [
        "ga-search",
        "--model",
        "V113_3",
        "--arity",
        "2",
        "--length",
        "8",
        "--objective",
        "cnot",
        "--seed",
        "42",
        "--population",
        "30",
        "--generations",
        "20",
        "--restarts",
        "1",
        "--backend",
        "native64",
    ];
    let a = json(&metaplectic(&args));
    let b = json(&metaplectic(&args));
    assert_eq!(a, b);
    assert_eq!(a["length"], 8);
    assert_eq!(a["provenance"]["seed"], 42);
}

#[test]
fn compile_emits_levels_and_plot_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("fig.csv");
    let cache = dir.path().join("cache.json");
    let args = [
        "compile",
        "--gate",
        "T",
        "--model",
        "fibonacci",
        "--basic-length",
        "10",
        "--level",
        "1",
        "--seed",
        "7",
        "--csv",
        csv_path.to_str().unwrap(),
        "--cache",
        cache.to_str().unwrap(),
    ];
    let v = json(&metaplectic(&args));
    let levels = v["levels"].as_object().unwrap();
    assert_eq!(levels.len(), 2);
    assert_eq!(levels["1"]["length"], 50);
    assert!(cache.exists());
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("level,distance\n"));
    assert_eq!(json(&metaplectic(&args)), v);
}

#[test]
fn run_table_two_writes_manifested_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = metaplectic(&[
        "run-table",
        "table2",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("table2.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
    let m: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("table2.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn unknown_table_is_rejected() {
    assert_ne!(metaplectic(&["run-table", "table9"]).status.code(), Some(0));
}
