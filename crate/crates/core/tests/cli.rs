use std::fs;
use std::path::Path;
use std::process::Command;

const CONFIG: &str = r#"
schema_version = 1
horizon = 400
repetitions = 3
seed = 2

[dimensions]
context = 3
arm = 2
relevant_context = 1
relevant_arm = 1

[environment]
kind = "gmm"

[oracle]
resolution = 100

[[algorithms]]
kind = "cmab-rl"
multiplier = 0.001

[[algorithms]]
kind = "uniform"
"#;

fn cmab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cmab")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn run_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let outs: Vec<_> = ["a", "b"].iter().map(|n| dir.path().join(n)).collect();
    for out in &outs {
        let o = cmab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["cmab-rl.csv", "uniform.csv", "summary.txt"] {
        let a = fs::read(outs[0].join(name)).unwrap();
        let b = fs::read(outs[1].join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
    // default stride max(1, 400 / 1000) = 1
    let csv = fs::read_to_string(outs[0].join("cmab-rl.csv")).unwrap();
    assert_eq!(csv.lines().count(), 401);
}

#[test]
fn overrides_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(cmab(&["run", "--config", &cfg, "--out", a.to_str().unwrap()]).status.success());
    let o = cmab(&[
        "run", "--config", &cfg, "--out", b.to_str().unwrap(), "--seed", "99", "--reps", "1",
    ]);
    assert!(o.status.success());
    let summary = fs::read_to_string(b.join("summary.txt")).unwrap();
    assert!(summary.contains("seeds = 99\n"));
    assert!(summary.contains("\nseed = 2\n"));
    assert_ne!(fs::read(a.join("uniform.csv")).unwrap(), fs::read(b.join("uniform.csv")).unwrap());
}

#[test]
fn grid_search_and_sweep_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let g = dir.path().join("g");
    let o = cmab(&[
        "grid-search", "--config", &cfg, "--multipliers", "0.001,0.1", "--out", g.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let grid = fs::read_to_string(g.join("grid_search.csv")).unwrap();
    assert_eq!(grid.lines().count(), 3);
    assert!(fs::read_to_string(g.join("summary.txt")).unwrap().contains("best.cmab-rl = "));

    let s = dir.path().join("s");
    let o = cmab(&["sweep", "--config", &cfg, "--horizons", "100,50,100", "--out", s.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sweep = fs::read_to_string(s.join("sweep.csv")).unwrap();
    let horizons: Vec<&str> = sweep.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(horizons, ["50", "50", "100", "100"]);
}

#[test]
fn errors_exit_nonzero_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let missing = cmab(&["run", "--config", "/nonexistent/c.toml", "--out", out.to_str().unwrap()]);
    assert!(!missing.status.success());
    let err = String::from_utf8_lossy(&missing.stderr);
    assert!(err.starts_with("error:") && err.contains("/nonexistent/c.toml"), "{err}");

    let bad = write_config(dir.path(), &CONFIG.replace("horizon = 400", "horizon = 0"));
    let o = cmab(&["run", "--config", &bad, "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("horizon"));

    let o = cmab(&["grid-search", "--config", &bad, "--multipliers", "x", "--out", "o"]);
    assert!(!o.status.success());
    assert!(!o.stderr.is_empty());
}
