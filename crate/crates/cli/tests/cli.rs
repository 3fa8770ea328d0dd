use std::path::Path;
use std::process::{Command, Output};

fn kuo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kuo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn last_row(o: &Output) -> Vec<f64> {
    let text = stdout(o);
    let line = text.lines().last().unwrap();
    line.split(',').map(|c| c.parse().unwrap()).collect()
}

#[test]
fn couette_baseline_row() {
    let o = kuo(&["eigen", "--beta", "0", "--c", "-1", "--n", "1"]);
    assert!(o.status.success());
    let row = last_row(&o);
    assert!((row[1] - std::f64::consts::PI.powi(2) / 4.0).abs() < 1e-6);
    assert!(stdout(&o).contains("n,lambda,error_estimate,resolution"));
}

#[test]
fn mirrored_speeds_agree() {
    let a = last_row(&kuo(&["eigen", "--beta", "1", "--c", "-1.0"]));
    let b = last_row(&kuo(&["eigen", "--beta", "-1", "--c", "1.0"]));
    assert_eq!(a[1], b[1]);
}

#[test]
fn exit_codes() {
    let o = kuo(&["eigen", "--beta", "1", "--c", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("essential spectrum"));

    let o = kuo(&["modified-flow", "--beta", "1", "--gamma", "0.3", "--a", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("min(1/2, 1/(10|beta|))"));

    let o = kuo(&["--resolution", "16", "eigen", "--beta", "0", "--c", "-2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = kuo(&["atlas", "speed", "--beta", "4", "--lambda0", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out-of-range-lambda"));

    // λ₁ at a = 0 is about 2.02, so the target 2.5 has no crossing.
    let o = kuo(&["modified-flow", "--beta", "0.5", "--gamma", "0.01", "--a", "0", "--level", "2.5", "--a-max", "4"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-bracket"));
}

#[test]
fn region_and_beta_star() {
    let o = kuo(&["atlas", "region", "--alpha", "1", "--beta", "0"]);
    assert!(stdout(&o).contains("# region = O"));
    let o = kuo(&["atlas", "beta-star"]);
    let row = last_row(&o);
    assert!(row[0] > 0.0 && row[1].abs() < 1e-5);
}

#[test]
fn curve_is_monotone() {
    let o = kuo(&["atlas", "curve", "--beta-min", "2", "--beta-max", "6", "--points", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let alphas: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("beta"))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(alphas.len(), 5);
    assert!(alphas.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn modified_flow_ground_state_positive() {
    let o = kuo(&["modified-flow", "--beta", "0.5", "--gamma", "0.01", "--a", "0", "--samples", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let eig = text.split("\n\n").nth(1).unwrap();
    let first: Vec<f64> = eig
        .lines()
        .find(|l| l.starts_with("1,"))
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert!(first[1] > 0.0);
}

#[test]
fn level_set_table() {
    let o = kuo(&["modified-flow", "--beta", "0.5", "--gamma", "0.01", "--a", "0", "--samples", "3", "--level", "1.9", "--a-max", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let row = last_row(&o);
    assert!(row[1] > 0.0 && (row[2] - 1.9).abs() <= 1e-8);
}

#[test]
fn bifurcate_and_damping_metadata() {
    let o = kuo(&["bifurcate", "--beta", "4", "--c", "-1.1"]);
    let text = stdout(&o);
    let slope: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# slope = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((1.8..=2.2).contains(&slope));

    let o = kuo(&["damping", "--beta", "1", "--t-end", "100"]);
    let text = stdout(&o);
    let get = |k: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("# {k} = ")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((get("ux_exponent") + 1.0).abs() < 0.3);
    assert!((get("uy_exponent") + 2.0).abs() < 0.3);
}

#[test]
fn json_and_plot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.json");
    let o = kuo(&[
        "--format", "json", "--plot", "--out", out.to_str().unwrap(),
        "atlas", "curve", "--beta-min", "2", "--beta-max", "4", "--points", "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json = std::fs::read_to_string(&out).unwrap();
    assert!(json.contains("\"columns\"") && json.contains("alpha_beta"));
    let svg = std::fs::read_to_string(dir.path().join("curve.svg")).unwrap();
    assert!(svg.contains("<polyline"));

    let o = kuo(&["--plot", "atlas", "beta-star"]);
    assert_eq!(o.status.code(), Some(2));
}

fn cached(dir: &Path, args: &[&str]) -> Vec<u8> {
    let mut all = vec!["--cache-dir", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    let o = kuo(&all);
    assert!(o.status.success());
    o.stdout
}

#[test]
fn cache_is_transparent_and_output_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["modified-flow", "--beta", "0.5", "--gamma", "0.02", "--a", "1", "--samples", "7", "--sweep"];
    let plain = kuo(&args).stdout;
    assert_eq!(plain, kuo(&args).stdout);
    let miss = cached(dir.path(), &args);
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 1);
    let hit = cached(dir.path(), &args);
    assert_eq!(plain, miss);
    assert_eq!(plain, hit);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "resolution = 128\nformat = json\n").unwrap();
    let o = kuo(&["--config", cfg.to_str().unwrap(), "eigen", "--beta", "0", "--c", "-2"]);
    let text = stdout(&o);
    assert!(text.starts_with('{') && text.contains("resolution=128"));
    let o = kuo(&["--config", cfg.to_str().unwrap(), "--format", "csv", "--resolution", "64", "eigen", "--beta", "0", "--c", "-2"]);
    let text = stdout(&o);
    assert!(text.starts_with('#') && text.contains("resolution=64"));
}
