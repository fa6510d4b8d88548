use std::fs;
use std::path::Path;
use std::process::Command;

fn opd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opd"))
}

fn run_ok(args: &[&str]) -> String {
    let output = opd().args(args).output().expect("spawn opd");
    assert!(
        output.status.success(),
        "opd {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).unwrap()
}

#[test]
fn run_writes_timeseries_snapshots_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "run",
        "--side", "12",
        "--steps", "15",
        "--replicates", "2",
        "--seed", "9",
        "--snapshot-step", "15",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(out.join("summary.csv").exists());
    assert!(out.join("rep00_timeseries.csv").exists());
    assert!(out.join("rep01_timeseries.csv").exists());
    assert!(out.join("rep00_step0000015.snap").exists());
    assert!(out.join("rep00_step0000015.ppm").exists());
    let csv = fs::read_to_string(out.join("rep00_timeseries.csv")).unwrap();
    assert!(csv.starts_with("step,frac_c,frac_d,frac_a\n"));
}

#[test]
fn fixed_seed_run_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &Path| {
        vec![
            "run".to_string(),
            "--side".into(), "10".into(),
            "--steps".into(), "10".into(),
            "--replicates".into(), "1".into(),
            "--seed".into(), "4".into(),
            "--out".into(), out.to_str().unwrap().to_string(),
        ]
    };
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let status_a = opd().args(args(&out_a)).status().unwrap();
    let status_b = opd().args(args(&out_b)).status().unwrap();
    assert!(status_a.success() && status_b.success());
    for name in ["summary.csv", "rep00_timeseries.csv"] {
        assert_eq!(
            fs::read(out_a.join(name)).unwrap(),
            fs::read(out_b.join(name)).unwrap(),
            "{name} differs across identical runs"
        );
    }
}

#[test]
fn config_file_drives_run_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(&config, "side = 10\nsteps = 5\nreplicates = 1\nseed = 2\n").unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "run",
        "--config", config.to_str().unwrap(),
        "--steps", "8",
        "--out", out.to_str().unwrap(),
    ]);
    let csv = fs::read_to_string(out.join("rep00_timeseries.csv")).unwrap();
    let last = csv.lines().last().unwrap();
    assert!(last.starts_with("8,"), "flag override lost: {last}");
}

#[test]
fn invalid_parameters_exit_nonzero() {
    let output = opd()
        .args(["run", "--b", "2.5", "--side", "10", "--steps", "1"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("error"), "stderr: {stderr}");

    let output = opd().args(["census", "--snapshot", "/no/such/file", "--row", "0", "--col", "0"]).output().unwrap();
    assert!(!output.status.success());
}

#[test]
fn perturb_and_census_work_on_a_written_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("base");
    run_ok(&[
        "run",
        "--side", "12",
        "--steps", "10",
        "--replicates", "1",
        "--seed", "3",
        "--snapshot-step", "10",
        "--out", out.to_str().unwrap(),
    ]);
    let snap = out.join("rep00_step0000010.snap");

    let census_out = run_ok(&["census", "--snapshot", snap.to_str().unwrap(), "--row", "4", "--col", "7"]);
    assert!(census_out.contains("neighbors: C="), "got: {census_out}");

    let pert_out = dir.path().join("pert");
    let stdout = run_ok(&[
        "perturb",
        "--snapshot", snap.to_str().unwrap(),
        "--from", "D",
        "--to", "A",
        "--rate", "1.0",
        "--steps", "20",
        "--seed", "5",
        "--out", pert_out.to_str().unwrap(),
    ]);
    assert!(stdout.contains("replicate 0"), "got: {stdout}");
    assert!(pert_out.join("summary.csv").exists());

    // keep-one at explicit coordinates: pick a cell that holds a C
    let text = fs::read_to_string(&snap).unwrap();
    let (row, col) = text
        .lines()
        .skip(1)
        .take(12)
        .enumerate()
        .find_map(|(r, line)| line.find('C').map(|c| (r, c)))
        .expect("snapshot has at least one cooperator");
    let keep_out = dir.path().join("keep");
    run_ok(&[
        "perturb",
        "--snapshot", snap.to_str().unwrap(),
        "--from", "C",
        "--to", "D",
        "--keep-one", &format!("{row},{col}"),
        "--steps", "5",
        "--out", keep_out.to_str().unwrap(),
    ]);
    assert!(keep_out.join("summary.csv").exists());
}
