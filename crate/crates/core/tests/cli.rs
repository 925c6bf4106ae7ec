use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use growthlab::Trajectory;
use tempfile::TempDir;

fn growthlab(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_growthlab"));
    cmd.args(args).env_remove("GROWTHLAB_SEED");
    if let Some(seed) = seed {
        cmd.env("GROWTHLAB_SEED", seed);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("config.toml");
    fs::write(&path, text).unwrap();
    path
}

fn run(config: &Path, out: &Path, seed: Option<&str>) -> Output {
    growthlab(&["run", config.to_str().unwrap(), "--out", out.to_str().unwrap()], seed)
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

const BELIEFS: &str = "model = \"beliefs\"\nseed = 3\n[parameters]\nn_samples = 20000\n\
                       [arguments]\nnames = [\"a\", \"b\"]\nmarginals = [0.3, 0.2]\n";

#[test]
fn digital_defaults_reach_threshold_growth() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "model = \"digital\"\nhorizon = 50.0\n");
    let out = dir.path().join("out");
    let result = run(&config, &out, None);
    assert_eq!(result.status.code(), Some(0), "{result:?}");
    let traj = Trajectory::read_csv(fs::File::open(out.join("trajectory.csv")).unwrap()).unwrap();
    let growth = traj.log_growth_rate(40.0, 50.0).unwrap();
    assert!((growth - 0.30).abs() < 0.01, "{growth}");
    assert!(out.join("chart.svg").exists());
    let m = manifest(&out);
    assert_eq!(m["config"]["model"], "digital");
    assert!(m["files"].as_array().unwrap().iter().all(|f| f["sha256"].as_str().unwrap().len() == 64));
}

#[test]
fn ces_level_matches_reproduced_table() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "model = \"ces-level\"\n[parameters]\nf = [0.05, 0.1, 0.25]\nrho = [-0.2, -0.4, -2.0]\n",
    );
    let (ran, reproduced) = (dir.path().join("run"), dir.path().join("table3"));
    assert_eq!(run(&config, &ran, None).status.code(), Some(0));
    let result = growthlab(&["reproduce", "table3", "--out", reproduced.to_str().unwrap()], None);
    assert_eq!(result.status.code(), Some(0));
    assert_eq!(
        fs::read(ran.join("table.csv")).unwrap(),
        fs::read(reproduced.join("table.csv")).unwrap()
    );
    let comparison = fs::read_to_string(reproduced.join("comparison.csv")).unwrap();
    assert_eq!(comparison.lines().count(), 10);
    assert!(!comparison.contains(",false,"));
}

#[test]
fn every_reproduce_target_exits_cleanly() {
    let dir = TempDir::new().unwrap();
    for target in ["table2-calibration", "table3", "fig-transitory", "fig-schedule", "appendixC", "appendixE"] {
        let out = dir.path().join(target);
        let result = growthlab(&["reproduce", target, "--out", out.to_str().unwrap()], None);
        assert_eq!(result.status.code(), Some(0), "{target}: {result:?}");
        assert!(out.join("comparison.csv").exists() && out.join("chart.svg").exists());
    }
}

#[test]
fn unknown_model_and_target_exit_2() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "model = \"solow\"\n");
    let out = dir.path().join("out");
    assert_eq!(run(&config, &out, None).status.code(), Some(2));
    let result = growthlab(&["reproduce", "figure9", "--out", out.to_str().unwrap()], None);
    assert_eq!(result.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn invalid_parameters_exit_3_without_writing() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    for text in [
        "model = \"delay\"\n[parameters]\nsavings = 0.3\n",
        "model = \"ces-level\"\n[parameters]\nrho = 0.5\n",
        "model = \"digital\"\n[parameters]\ns = 1.5\n",
        "model = \"semi-endog\"\nhorizon = -1.0\n",
        "model = \"delay\"\nhorizonn = 3\n",
    ] {
        let config = write_config(&dir, text);
        let result = run(&config, &out, None);
        assert_eq!(result.status.code(), Some(3), "{text}: {result:?}");
        assert!(!out.exists(), "{text}");
    }
    let config = write_config(&dir, BELIEFS);
    assert_eq!(run(&config, &out, Some("abc")).status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn unwritable_directory_exits_4() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "model = \"ces-level\"\n");
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    assert_eq!(run(&config, &blocker.join("out"), None).status.code(), Some(4));
}

#[test]
fn reruns_give_identical_hashes() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, BELIEFS);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(run(&config, &a, None).status.code(), Some(0));
    assert_eq!(run(&config, &b, None).status.code(), Some(0));
    assert_eq!(manifest(&a)["files"], manifest(&b)["files"]);
    assert_eq!(fs::read(a.join("beliefs.csv")).unwrap(), fs::read(b.join("beliefs.csv")).unwrap());
}

#[test]
fn seed_variable_overrides_config() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, BELIEFS);
    let (plain, seeded) = (dir.path().join("plain"), dir.path().join("seeded"));
    assert_eq!(run(&config, &plain, None).status.code(), Some(0));
    assert_eq!(run(&config, &seeded, Some("99")).status.code(), Some(0));
    assert_eq!(manifest(&plain)["seed"], 3);
    assert_eq!(manifest(&seeded)["seed"], 99);
    assert_ne!(
        fs::read(plain.join("beliefs.csv")).unwrap(),
        fs::read(seeded.join("beliefs.csv")).unwrap()
    );
}
