use std::fs;
use std::path::{Path, PathBuf};

use jobswitch_cli::main_with;
use jobswitch_cli::output::sha256_hex;
use serde_json::Value;

const COARSE: &str = "501,750,12";

fn run(out: &Path, args: &[&str]) -> i32 {
    let mut full = vec!["jobswitch".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    full.extend(["--out".to_string(), out.display().to_string(), "--quiet".to_string()]);
    main_with(full)
}

fn run_dirs(out: &Path, prefix: &str) -> Vec<PathBuf> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with(prefix))
        .collect();
    dirs.sort();
    dirs
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn simulate_is_reproducible_and_manifest_hashes_match() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["simulate", "--method", "psor", "--grid", COARSE, "--paths", "1000", "--steps", "200", "--seed", "5"];
    assert_eq!(run(tmp.path(), &args), 0);
    assert_eq!(run(tmp.path(), &args), 0);
    let dirs = run_dirs(tmp.path(), "simulate-");
    assert_eq!(dirs.len(), 2);
    let a = fs::read(dirs[0].join("sim_report.json")).unwrap();
    let b = fs::read(dirs[1].join("sim_report.json")).unwrap();
    assert_eq!(a, b);
    for dir in &dirs {
        let m = manifest(dir);
        assert_eq!(m["status"], "ok");
        for f in m["files"].as_array().unwrap() {
            let bytes = fs::read(dir.join(f["name"].as_str().unwrap())).unwrap();
            assert_eq!(f["sha256"].as_str().unwrap(), sha256_hex(&bytes));
        }
    }
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn missing_parameter_is_named_and_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("params.json");
    let mut params: Value = serde_json::from_str(
        r#"{"beta":0.02,"r":0.01,"mu":0.07,"sigma":0.2,"eps0":0.3,"eps1":1,"L0":0.5,"L1":1,
            "zeta0":3,"zeta1":1,"T":30,"gamma":3}"#,
    )
    .unwrap();
    params.as_object_mut().unwrap().remove("sigma");
    fs::write(&cfg, params.to_string()).unwrap();
    let out = tmp.path().join("runs");
    assert_eq!(run(&out, &["solve-pde", "--config", cfg.to_str().unwrap()]), 2);
    let m = manifest(&run_dirs(&out, "solve-pde-")[0]);
    assert_eq!(m["status"], "failed");
    assert_eq!(m["failure_stage"], "load_config");
    assert!(m["error"].as_str().unwrap().contains("sigma"));
}

#[test]
fn violated_assumption_exits_with_validation_status() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("params.json");
    fs::write(
        &cfg,
        r#"{"beta":0.02,"r":0.01,"mu":0.07,"sigma":0.2,"eps0":0.3,"eps1":1,"L0":0.5,"L1":1,
            "zeta0":3,"zeta1":0,"T":30,"gamma":3}"#,
    )
    .unwrap();
    assert_eq!(run(tmp.path(), &["solve-ie", "--config", cfg.to_str().unwrap()]), 2);
    assert_eq!(run(tmp.path(), &["solve-pde", "--grid", "2,10,12"]), 2);
}

#[test]
fn penalty_method_is_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["solve-pde", "--method", "penalty", "--eps", "1e-4", "--grid", "201,300,12"]), 0);
    let dir = &run_dirs(tmp.path(), "solve-pde-")[0];
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.join("solve_report.json")).unwrap()).unwrap();
    assert_eq!(report["method"], "penalty");
    assert_eq!(manifest(dir)["config"]["options"]["method"], "penalty");
}

#[test]
fn pde_boundaries_have_no_upper_curve_before_t1() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["solve-pde", "--grid", COARSE]), 0);
    let dir = &run_dirs(tmp.path(), "solve-pde-")[0];
    let text = fs::read_to_string(dir.join("boundaries_pde.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tau,t,x0,x1,lambda0,lambda1");
    let t1 = 4.380_262_265_839_288_5;
    let mut seen_x0 = false;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let tau: f64 = cells[0].parse().unwrap();
        if tau <= t1 {
            assert!(cells[2].is_empty(), "x0 present at tau {tau}");
        } else if !cells[2].is_empty() {
            seen_x0 = true;
        }
    }
    assert!(seen_x0);
}

#[test]
fn strategy_tables_have_fixed_headers() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["strategy", "--method", "psor", "--grid", COARSE]), 0);
    let dir = &run_dirs(tmp.path(), "strategy-")[0];
    let bounds = fs::read_to_string(dir.join("wealth_boundaries.csv")).unwrap();
    assert_eq!(bounds.lines().next().unwrap(), "t,w0,w1");
    let table = fs::read_to_string(dir.join("strategy.csv")).unwrap();
    assert_eq!(table.lines().next().unwrap(), "t,w,job,c,pi,region");
    let regions: Vec<&str> = table.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert!(regions.iter().all(|r| ["WR0", "SR0", "WR1", "SR1"].contains(r)));
    assert!(regions.contains(&"SR0") && regions.contains(&"WR1"));
}
