use std::path::Path;
use std::process::{Command, Output};

use extender_core::io::graph_from_json;
use tempfile::TempDir;

fn extender() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_extender"));
    cmd.env_remove("EXTENDER_SEED").env_remove("EXTENDER_OUT_DIR");
    cmd
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn fail(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    err
}

fn write(dir: &TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn manifest_seed(dir: &Path) -> u64 {
    let text = std::fs::read_to_string(dir.join("manifest.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["seed"].as_u64().unwrap()
}

#[test]
fn hn_build_is_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    let dirs = ["a", "b", "c"].map(|d| tmp.path().join(d));
    for (dir, seed) in dirs.iter().zip(["5", "5", "6"]) {
        run(extender()
            .args(["report", "--pipeline", "hn-build", "--param", "n=256", "--seed", seed, "--out-dir"])
            .arg(dir));
    }
    let files = ["manifest.json", "results.json", "degrees.csv", "gnd.json", "hn.json", "hn.dot"];
    for f in files {
        let a = std::fs::read(dirs[0].join(f)).unwrap();
        assert_eq!(a, std::fs::read(dirs[1].join(f)).unwrap(), "{f}");
    }
    assert_ne!(std::fs::read(dirs[0].join("gnd.json")).unwrap(), std::fs::read(dirs[2].join("gnd.json")).unwrap());
    let hn = graph_from_json(&std::fs::read_to_string(dirs[0].join("hn.json")).unwrap()).unwrap();
    assert!(hn.edges().iter().all(|&(x, y)| x < y));
}

#[test]
fn generate_writes_json_and_dot() {
    let tmp = TempDir::new().unwrap();
    let json = tmp.path().join("g.json");
    let dot = tmp.path().join("g.dot");
    run(extender()
        .args(["generate", "--n", "64", "--seed", "3", "--cleanup", "10", "--out"])
        .arg(&json)
        .arg("--dot")
        .arg(&dot));
    let g = graph_from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(dot.matches("->").count(), g.edge_count());
    assert!(g.edges().iter().all(|&(x, y)| x < y));
}

#[test]
fn codepth_on_a_chain() {
    let tmp = TempDir::new().unwrap();
    let chain = write(&tmp, "chain.json", r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
    let out = run(extender().arg("codepth").arg("--input").arg(&chain));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["codepth"], 2);
    assert_eq!(v["path"], serde_json::json!([0, 1, 2]));
    let out = run(extender().arg("codepth").arg("--input").arg(&chain).args(["--remove", "1"]));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["codepth"], 0);
}

#[test]
fn shallow_relabels_decreasing_input() {
    let tmp = TempDir::new().unwrap();
    let edges: Vec<String> = (1..50).map(|v| format!("[{v},{}]", v - 1)).collect();
    let g = write(&tmp, "rev.json", &format!(r#"{{"n":50,"edges":[{}]}}"#, edges.join(",")));
    let out = run(extender().args(["shallow", "--eps", "1/2", "--input"]).arg(&g));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["relabelled"], true);
    assert_eq!(v["codepth_ok"], true);
    assert_eq!(v["S"].as_array().unwrap().len(), v["size"].as_u64().unwrap() as usize);
}

#[test]
fn errors_are_single_coded_lines() {
    let tmp = TempDir::new().unwrap();
    let missing = tmp.path().join("missing.json");
    assert!(fail(extender().arg("codepth").arg("--input").arg(&missing)).starts_with("error: E_IO: "));

    let bad = write(&tmp, "bad.json", "{\"n\": 3,\n \"edges\": [[0,1],]}");
    let err = fail(extender().arg("codepth").arg("--input").arg(&bad));
    assert!(err.starts_with("error: E_PARSE: ") && err.contains("line 2"), "{err}");

    let cyclic = write(&tmp, "cyc.json", r#"{"n":2,"edges":[[0,1],[1,0]]}"#);
    assert!(fail(extender().arg("codepth").arg("--input").arg(&cyclic)).starts_with("error: E_CYCLIC: "));

    let err = fail(extender().args(["report", "--pipeline", "nope"]));
    assert!(err.starts_with("error: E_PIPELINE: ") && err.contains("hn-build"), "{err}");

    let err = fail(extender().args(["report", "--pipeline", "hn-build", "--param", "size=3"]));
    assert!(err.starts_with("error: E_CONFIG: ") && err.contains("\"size\""), "{err}");

    let err = fail(extender().args(["lemma35", "--n", "64", "--random", "1", "--out-dir"]).arg(tmp.path()));
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn lemma35_reports_exact_fractions() {
    let tmp = TempDir::new().unwrap();
    run(extender().args(["lemma35", "--n", "256", "--random", "3", "--out-dir"]).arg(tmp.path()));
    let mut reader = csv::Reader::from_path(tmp.path().join("lemma35.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 13);
    for row in &rows {
        assert_eq!(&row[col("bound")], "5/2");
        let (p, q) = row[col("mass")].split_once('/').unwrap_or((&row[col("mass")], "1"));
        let (p, q): (f64, f64) = (p.parse().unwrap(), q.parse().unwrap());
        let decimal: f64 = row[col("mass_decimal")].parse().unwrap();
        assert!((p / q - decimal).abs() < 1e-12);
        assert_eq!(&row[col("holds")], "true");
        assert_eq!(&row[col("window_mass_agrees")], "true");
    }
}

#[test]
fn seed_and_out_dir_precedence() {
    let tmp = TempDir::new().unwrap();
    let env_dir = tmp.path().join("env");
    run(extender()
        .args(["report", "--pipeline", "hn-build", "--param", "n=64"])
        .env("EXTENDER_SEED", "7")
        .env("EXTENDER_OUT_DIR", &env_dir));
    assert_eq!(manifest_seed(&env_dir), 7);

    let flag_dir = tmp.path().join("flag");
    run(extender()
        .args(["report", "--pipeline", "hn-build", "--param", "n=64", "--seed", "9", "--out-dir"])
        .arg(&flag_dir)
        .env("EXTENDER_SEED", "7")
        .env("EXTENDER_OUT_DIR", &env_dir));
    assert_eq!(manifest_seed(&flag_dir), 9);

    let cfg_dir = tmp.path().join("cfg");
    let cfg = write(
        &tmp,
        "cfg.json",
        &format!(
            r#"{{"experiment":"hn-build","params":{{"n":64,"d":4}},"seed":11,"out_dir":{}}}"#,
            serde_json::to_string(&cfg_dir).unwrap()
        ),
    );
    run(extender().arg("report").arg("--config").arg(&cfg).args(["--param", "d=2"]));
    assert_eq!(manifest_seed(&cfg_dir), 11);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(cfg_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["params"]["d"], "2");
    assert_eq!(manifest["params"]["n"], "64");
}

#[test]
fn shift_search_reports_first_satisfiable_width() {
    let tmp = TempDir::new().unwrap();
    run(extender()
        .args([
            "circuits",
            "shift-search",
            "--n",
            "2",
            "--eps",
            "1/4",
            "--indeg",
            "2",
            "--advice-cap",
            "1",
            "--out-dir",
        ])
        .arg(tmp.path()));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("results.json")).unwrap()).unwrap();
    let statuses: Vec<&str> = v["configs"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["unsatisfiable", "satisfiable"]);
}
