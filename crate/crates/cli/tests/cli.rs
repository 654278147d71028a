use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dgetc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgetc"))
        .args(args)
        .env("DGETC_TIMESTAMP", "fixed")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

const SMALL: &str = r#"
algorithm = "dgetc"
horizon = 2000
replications = 3
seed = 5

[function]
family = "example"
xi = [0.5, -0.25]
nu = 1.0

[noise]
kind = "gaussian"
sigma = 0.1
"#;

#[test]
fn solve_easy_instance() {
    let o = dgetc(&["solve", "--xi", "0.5,-0.25", "--nu", "1", "--repeats", "10"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("set {0}\n"), "{out}");
    assert!(out.contains("value 0.75\n"));
    assert!(out.contains("ratio 1\n"));
}

#[test]
fn hardness_easy_instance() {
    let o = dgetc(&["hardness", "--xi=0.5,-0.25"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("item,h,gap,zone\n0,4,0.5,"), "{out}");
    assert!(out.contains("\n1,16,0.25,"));
    assert!(out.ends_with("global,20\n"));
}

#[test]
fn check_passes_on_family_and_fails_on_supermodular_table() {
    let o = dgetc(&["check", "--function", configs().join("mixed.toml").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "submodular: pass\nrange: pass\nlemma3: pass\n");

    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("square.toml");
    std::fs::write(&table, "family = \"table\"\nd = 2\nvalues = [0.0, 1.0, 1.0, 4.0]\n").unwrap();
    let o = dgetc(&["check", "--function", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("submodular: fail"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(dgetc(&[]).status.code(), Some(2));
    assert_eq!(dgetc(&["solve"]).status.code(), Some(2));
    assert_eq!(dgetc(&["run", "x.toml", "--set", "novalue"]).status.code(), Some(2));
    assert_eq!(dgetc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn invalid_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let o = dgetc(&["run", cfg.to_str().unwrap(), "--set", "horizon=0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("horizon"));
    let o = dgetc(&["run", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.toml"));
}

#[test]
fn run_is_byte_identical_with_pinned_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (out, jobs) in [(&a, "1"), (&b, "3")] {
        let o = dgetc(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", jobs]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["summary.csv", "aggregate.csv", "commitments.csv", "config.toml", "trace_rep1.jsonl"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
    let head = std::fs::read_to_string(a.join("summary.csv")).unwrap();
    assert!(head.starts_with("# config_sha256=") && head.lines().next().unwrap().ends_with("timestamp=fixed"));
}

#[test]
fn seed_override_and_no_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let run = |out: &Path, seed: &str| {
        let o = dgetc(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", seed, "--no-trace"]);
        assert!(o.status.success());
        std::fs::read_to_string(out.join("summary.csv")).unwrap()
    };
    let a = run(&dir.path().join("a"), "1");
    let b = run(&dir.path().join("b"), "2");
    assert_ne!(a, b);
    assert!(a.contains("seed=1 "));
    assert!(!dir.path().join("a/trace_rep0.jsonl").exists());
}

#[test]
fn sweep_writes_long_table() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("g.toml");
    let text = "[base]\nalgorithm = \"dgetc\"\nhorizon = 400\nreplications = 2\nseed = 1\n\
         function = { family = \"example\", xi = [0.5, -0.25], nu = 1.0 }\n\
         noise = { kind = \"none\" }\n\n[axes]\nalgorithm = [\"dgetc\", \"rgl\"]\n";
    std::fs::write(&grid, text).unwrap();
    let out = dir.path().join("out");
    let o = dgetc(&["sweep", grid.to_str().unwrap(), "--out", out.to_str().unwrap(), "--no-trace"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let rows: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "cell,label,replication,regret,exploration_rounds,truncated,error");
    assert_eq!(rows.len(), 5);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn shipped_configs_parse() {
    let o = dgetc(&["run", configs().join("easy.toml").to_str().unwrap(), "--set", "horizon=500", "--set", "replications=2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("replications 2"));
}
