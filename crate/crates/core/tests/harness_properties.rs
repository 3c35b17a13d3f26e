use std::path::Path;
use std::process::Command;

use apnls::harness::plotdata::{emit_plotdata, PlotMode};
use apnls::harness::sweep::{nls_reference, run_sweep, SweepTable};
use apnls::harness::{ExperimentConfig, ReferenceCache};

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        epsilons: vec![0.1, 0.05],
        points: vec![32, 64],
        times: vec![0.02, 0.04],
        reference_points: 256,
        ..ExperimentConfig::desk_1d()
    }
}

#[test]
fn sweep_tables_do_not_depend_on_thread_count() {
    let config = small_config();
    let one = run_sweep(&config, None, Some(1)).unwrap();
    let four = run_sweep(&config, None, Some(4)).unwrap();
    assert_eq!(one.to_csv(None), four.to_csv(None));
    assert_eq!(one.records.len(), 2 * 2 * 2);
    assert!(one.records.iter().all(|r| r.status.is_ok() && r.wall_time.is_none()));
}

#[test]
fn cached_references_reproduce_fresh_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ReferenceCache::new(dir.path());
    let config = small_config();
    let (fresh, from_disk) = nls_reference(&config, 0.1, Some(&cache)).unwrap();
    assert!(!from_disk);
    let (again, from_disk) = nls_reference(&config, 0.1, Some(&cache)).unwrap();
    assert!(from_disk);
    assert_eq!(fresh, again);

    let uncached = run_sweep(&config, None, None).unwrap();
    let cached = run_sweep(&config, Some(&cache), None).unwrap();
    assert_eq!(uncached.to_csv(None), cached.to_csv(None));
}

#[test]
fn different_keys_use_different_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ReferenceCache::new(dir.path());
    let config = small_config();
    nls_reference(&config, 0.1, Some(&cache)).unwrap();
    nls_reference(&config, 0.05, Some(&cache)).unwrap();
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 2);
}

#[test]
fn written_tables_read_back_and_feed_plotdata() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config();
    let table = run_sweep(&config, None, None).unwrap();
    table.write(dir.path(), &config).unwrap();
    let back = SweepTable::read_dir(dir.path()).unwrap();
    assert_eq!(back.to_csv(None), table.to_csv(None));
    let files = emit_plotdata(&back.records, PlotMode::VsJ, dir.path().join("plot")).unwrap();
    // one series per (t, ε)
    assert_eq!(files.len(), 4);
    let text = std::fs::read_to_string(&files[0]).unwrap();
    assert!(text.contains("# slope_rho"));
}

fn apnls(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_apnls")).args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("experiment.cfg");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn selftest_exits_zero() {
    let out = apnls(&["selftest", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.cfg");
    assert_eq!(apnls(&["sweep", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
    let bad = write_config(dir.path(), "[sweep]\npoints = 48\n");
    assert_eq!(apnls(&["run", "--config", &bad]).status.code(), Some(2));
    let unknown = write_config(dir.path(), "[sweep]\nbogus = 1\n");
    assert_eq!(apnls(&["run", "--config", &unknown]).status.code(), Some(2));
}

#[test]
fn blow_up_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[experiment]\nequation = ap-nls\n[sweep]\nepsilons = 0.01\npoints = 256\ntimes = 1.0\ncfl = 5\ndt_max = 1\n",
    );
    let out = apnls(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blow-up"));
}

#[test]
fn sweep_and_plotdata_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config();
    let path = dir.path().join("small.cfg");
    config.save(&path).unwrap();
    let out_dir = dir.path().join("out");
    let cache_dir = dir.path().join("cache");
    let common = [
        "--config",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--cache",
        cache_dir.to_str().unwrap(),
    ];
    let sweep = apnls(&[&["sweep", "--threads", "2"], &common[..]].concat());
    assert_eq!(sweep.status.code(), Some(0), "{}", String::from_utf8_lossy(&sweep.stderr));
    let csv = std::fs::read_to_string(out_dir.join("errors-t0.02.csv")).unwrap();
    assert!(csv.starts_with("epsilon,J,t,err_rho,err_j,walltime_s,status"));
    let plot = apnls(&[&["plotdata", "--mode", "vs-eps"], &common[..]].concat());
    assert_eq!(plot.status.code(), Some(0));
    assert!(std::fs::read_dir(out_dir.join("plotdata")).unwrap().count() > 0);
}
