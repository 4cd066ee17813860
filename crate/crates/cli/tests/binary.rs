use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn landscape(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landscape"))
        .args(args)
        .env_remove("LANDSCAPE_OUT")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/constant")
}

const GOLDEN_ARGS: &[&str] = &[
    "scan2d", "--model", "constant", "--dim", "3", "--value", "0.5", "--res", "5", "--range",
    "-1:1", "--seed", "7", "--formats", "json,csv,svg",
];

#[test]
fn spec_example_writes_json_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run1");
    let o = landscape(&[
        "scan2d", "--model", "sombrero", "--dim", "4", "--nu", "2", "--res", "50", "--range",
        "-10:10", "--seed", "1", "--out", out.to_str().unwrap(), "--formats", "json,svg",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert!(out.join("scan2d.json").is_file());
    assert!(out.join("scan2d.svg").is_file());
    assert!(!out.join("scan2d.csv").exists());
    assert!(stderr(&o).contains("2500 loss evaluations"));
}

#[test]
fn missing_model_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = landscape(&["scan2d", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing required: --model"));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for args in [
        vec!["scan2d", "--model", "sombrero", "--dim", "2", "--bogus", "--out", d],
        vec!["scan2d", "--model", "sombrero", "--dim", "2", "--range", "3:1", "--out", d],
        vec!["scan2d", "--model", "sombrero", "--dim", "2", "--formats", "png", "--out", d],
        vec!["scan2d", "--graph-file", "/nonexistent/graph.txt", "--out", d],
        vec!["run", "--config", "/nonexistent/config.json", "--out", d],
        vec!["scan2d", "--model", "sombrero", "--dim", "2", "--origin", "1,2,3", "--out", d],
        vec!["neb", "--model", "sombrero", "--dim", "2", "--to", "1,1", "--out", d],
        vec!["nonsense"],
    ] {
        let o = landscape(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    let o = landscape(&["neb", "--model", "sombrero", "--dim", "2", "--to", "1,1", "--out", d]);
    assert!(stderr(&o).contains("missing required: from"));
}

#[test]
fn numerical_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = landscape(&[
        "scan2d", "--model", "constant", "--dim", "2", "--value", "nan", "--res", "3", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(landscape(&["--help"]).status.code(), Some(0));
    assert_eq!(landscape(&["--version"]).status.code(), Some(0));
    assert_eq!(landscape(&["scan2d", "--help"]).status.code(), Some(0));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_landscape"))
        .args(["scan1d", "--model", "sombrero", "--dim", "3", "--points", "11", "--formats", "csv"])
        .env("LANDSCAPE_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("scan1d.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
    let o = landscape(&["scan1d", "--model", "sombrero", "--dim", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--out"));
}

#[test]
fn constant_golden_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = GOLDEN_ARGS.to_vec();
    let out = dir.path().to_str().unwrap();
    args.extend(["--out", out]);
    let o = landscape(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let golden = golden_dir();
    let bless = std::env::var_os("LANDSCAPE_BLESS").is_some();
    for name in ["scan2d.json", "scan2d.csv", "scan2d.svg"] {
        let got = std::fs::read(dir.path().join(name)).unwrap();
        if bless {
            std::fs::create_dir_all(&golden).unwrap();
            std::fs::write(golden.join(name), &got).unwrap();
        }
        let want = std::fs::read(golden.join(name)).unwrap();
        assert!(got == want, "{name} differs from golden");
    }
}

#[test]
fn config_file_reproduces_flag_run() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let o = landscape(&[
        "pca-scan", "--model", "quadratic", "--curvatures", "1,3,0.5", "--starts", "3",
        "--iterations", "40", "--res", "8", "--seed", "5", "--formats", "json,csv,svg",
        "--out", a.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    // The embedded configuration is enough to re-run the command.
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join("pca-scan.json")).unwrap()).unwrap();
    let cfg_path = dir.path().join("config.json");
    std::fs::write(&cfg_path, doc["config"].to_string()).unwrap();
    let b = dir.path().join("b");
    let o = landscape(&["run", "--config", cfg_path.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["pca-scan.json", "pca-scan.csv", "pca-scan.svg"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn every_operation_runs() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.txt");
    std::fs::write(&graph, "n 4\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n").unwrap();
    let dist = dir.path().join("dist.txt");
    std::fs::write(&dist, "00 0.5\n11 0.5\n").unwrap();
    let g = graph.to_str().unwrap();
    let q = dist.to_str().unwrap();
    let runs: Vec<(Vec<&str>, &str)> = vec![
        (vec!["scan1d", "--model", "sombrero", "--dim", "2", "--to", "3,4", "--points", "21"], "scan1d.json"),
        (vec!["scan2d", "--graph-file", g, "--layers", "1", "--res", "6"], "scan2d.json"),
        (vec!["hessian", "--model", "sombrero", "--dim", "3", "--scan-points", "9"], "hessian.json"),
        (vec!["hessian", "--model", "quadratic", "--curvatures", "2,4", "--method", "spsa", "--repetitions", "100"], "hessian.json"),
        (vec!["eigen-ratio-scan", "--model", "sombrero", "--dim", "2", "--res", "4", "--range", "-3:3"], "eigen-ratio-scan.json"),
        (vec!["neb", "--model", "sombrero", "--dim", "2", "--from", "3.8626,0", "--to", "0,3.8626", "--iterations", "20"], "neb.json"),
        (vec!["autoneb", "--model", "sombrero", "--dim", "2", "--from", "3.8626,0", "--to", "0,0", "--iterations", "20", "--cycles", "2"], "autoneb.json"),
        (vec!["optimize", "--dist-file", q, "--n-qubits", "2", "--optimizer", "spsa", "--iterations", "10", "--starts", "2"], "optimize.json"),
        (vec!["optimize", "--model", "pauli", "--n-qubits", "2", "--hamiltonian", "0.5*ZZ - 0.3*XI", "--shots", "100", "--iterations", "3"], "optimize.json"),
        (vec!["scan1d", "--model", "qcbm", "--n-qubits", "2", "--target", "random", "--to", "7,0,0,0,0,0,0,0", "--wrap"], "scan1d.json"),
    ];
    for (k, (args, file)) in runs.into_iter().enumerate() {
        let out = dir.path().join(format!("r{k}"));
        let mut args = args;
        let o = out.to_str().unwrap().to_string();
        args.extend(["--formats", "json,csv,svg", "--out", &o]);
        let res = landscape(&args);
        assert!(res.status.success(), "{args:?}: {}", stderr(&res));
        let doc: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join(file)).unwrap()).unwrap();
        assert_eq!(doc["spec_version"], landscape_cli::SPEC_VERSION);
        assert!(doc["eval_count"].as_u64().unwrap() > 0);
        assert!(doc["model"]["kind"].is_string());
    }
}
