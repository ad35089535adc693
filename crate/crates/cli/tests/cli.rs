use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imdd-ic")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn p2p_prints_json() {
    let o = run(&["p2p", "--peak-ratio", "1", "--alpha", "0.5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with(r#"{"peak_ratio":1.0,"alpha":0.5,"lower":"#), "{text}");
    assert!(text.contains(r#""upper":0.49"#), "{text}");
}

#[test]
fn validation_errors_exit_with_two() {
    assert_eq!(code(&run(&["p2p", "--peak-ratio", "0", "--alpha", "0.5"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let o = run(&[
        "region", "--peak-ratio", "100", "--alpha", "0.4", "--cross-gain", "0.5",
        "--bounds", "tin,bogus", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bogus"));
    assert!(!out.exists());

    let csv = dir.path().join("g.csv");
    let o = run(&["gdof", "--peak-ratio", "100", "--alpha", "0.4", "--steps", "1", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!csv.exists());

    // Missing output path.
    assert_eq!(code(&run(&["scenario", "onchip"])), 2);
    assert_eq!(code(&run(&["scenario", "atlantis", "--out", out.to_str().unwrap()])), 2);
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"peak": 100, "sigma": 1, "alpha": [0.5, 0.5], "gains": [[1, 0.2], [-0.1, 1]]}"#).unwrap();
    let o = run(&["region", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("gains[1][0]"), "{}", stderr(&o));
}

#[test]
fn region_writes_one_csv_per_bound() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"peak": 100, "sigma": 1, "alpha": [0.5, 0.3], "gains": [[1, 0.2], [0.4, 0.8]]}"#).unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "region", "--config", cfg.to_str().unwrap(), "--bounds", "z,ge,tin",
        "--peak-steps", "5", "--ratio-steps", "3", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for name in ["z", "genie", "tin"] {
        assert!(out.join(format!("{name}.csv")).is_file());
    }
    assert!(!out.join("hk.csv").exists());
}

fn small_scenario(dir: &Path) -> String {
    let path = dir.join("chip.json");
    fs::write(
        &path,
        r#"{"units": "cm", "peak": 1000, "sigma": 1, "alpha": 0.5,
            "lambertian": {"half_angle_deg": 60, "fov_deg": 70, "area": 0.1, "gain": 1},
            "transmitters": [{"pos": [1.5, 0], "dir": [0, 1]}, {"pos": [4.5, 0], "dir": [0, 1]}],
            "receivers": [{"pos": [0, 2], "dir": [0, -1]}, {"pos": [4, 4], "dir": [0, -1]}],
            "sweep": {"rect": [0, 0, 6, 6], "nx": 4, "ny": 4}}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn scenario_and_gdof_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = small_scenario(dir.path());
    let mut sweeps = Vec::new();
    let mut curves = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("s{k}"));
        let o = run(&["scenario", &scenario, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        sweeps.push(fs::read(out.join("sweep.csv")).unwrap());

        let csv = dir.path().join(format!("g{k}.csv"));
        let o = run(&[
            "gdof", "--peak-ratio", "100", "--alpha", "0.4", "--steps", "5",
            "--peak-steps", "5", "--ratio-steps", "3", "--fine-peak-steps", "0",
            "--out", csv.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        curves.push(fs::read(csv).unwrap());
    }
    assert_eq!(sweeps[0], sweeps[1]);
    assert_eq!(curves[0], curves[1]);
    let text = String::from_utf8(sweeps.remove(0)).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert!(text.starts_with("x,y,tdma,tin,hk\n"));
}
