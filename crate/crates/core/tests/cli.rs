use std::process::Command;

use spinwitness::cli::{compute, parse_csv, run, Experiment, OutputFormat, RunConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinwitness"))
}

fn fig3_alpha_point_four(csv: &str) -> f64 {
    let t = parse_csv("fig3", csv).unwrap();
    let i = t.column_index("t_c_chi").unwrap();
    t.rows()
        .iter()
        .find(|r| (r[0] - 0.4).abs() < 1e-12)
        .expect("alpha = 0.4 row")[i]
}

#[test]
fn fig3_default_reads_target_susceptibility_temperature() {
    let out = bin().arg("fig3").output().unwrap();
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!((fig3_alpha_point_four(&csv) - 90.88).abs() <= 0.05);
    assert!(csv.contains("non-monotonic = true"));
}

#[test]
fn fig5_rows_respect_bound() {
    let t = &compute(&RunConfig::new(Experiment::Fig5)).unwrap()[0].table;
    assert_eq!(t.rows().len(), 500);
    assert!(t
        .column("p_plus_q")
        .unwrap()
        .iter()
        .all(|&s| s <= 1.0 + 1e-12));
}

#[test]
fn sweep_spin_scaled_temperature_decreases() {
    let out = bin()
        .args(["sweep-spin", "--cluster", "dimer", "--s-max", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let t = parse_csv("sweep-spin", &String::from_utf8(out.stdout).unwrap()).unwrap();
    let scaled = t.column("t_e_scaled").unwrap();
    assert_eq!(scaled.len(), 6);
    assert!(scaled.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn files_are_deterministic_and_config_echo_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let run_into = |sub: &str| {
        let path = dir.path().join(sub);
        let status = bin()
            .args([
                "fig6",
                "--b-points",
                "40",
                "--d",
                "0.5",
                "--format",
                "csv+svg",
                "--out",
            ])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        (
            std::fs::read_to_string(path.join("fig6.csv")).unwrap(),
            std::fs::read_to_string(path.join("fig6.svg")).unwrap(),
        )
    };
    let (csv_a, svg_a) = run_into("a");
    let (csv_b, svg_b) = run_into("b");
    assert_eq!(csv_a, csv_b);
    assert_eq!(svg_a, svg_b);
    for series in ["p", "q", "p_plus_q"] {
        assert!(svg_a.contains(&format!(r#"data-series="{series}""#)));
    }

    // the header lines, stripped of '#', are a valid config file
    let cfg: String = csv_a
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .map(|l| format!("{l}\n"))
        .collect();
    let cfg_path = dir.path().join("replay.cfg");
    std::fs::write(&cfg_path, cfg).unwrap();
    let out = bin()
        .args(["fig6", "--config"])
        .arg(&cfg_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), csv_a);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "# tetramer\nalpha = 1.0\nt-points = 4\n").unwrap();
    let out = bin()
        .args(["fig1", "--t-points", "3", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.contains("# alpha = 1\n"));
    assert_eq!(parse_csv("fig1", &csv).unwrap().rows().len(), 3);
}

#[test]
fn fig1_svg_has_decaying_c12() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(Experiment::Fig1);
    cfg.out_dir = Some(dir.path().to_path_buf());
    cfg.format = OutputFormat::CsvSvg;
    let out = run(&cfg).unwrap();
    assert_eq!(out.files.len(), 2);
    let t = &out.artifacts[0].table;
    let c12 = t.column("c_12").unwrap();
    assert_eq!(c12.len(), 300);
    assert!(c12.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(c12[0] > 0.5 && *c12.last().unwrap() == 0.0);
    assert!(t.column("c_23").unwrap().iter().all(|&c| c == 0.0));
    let svg = std::fs::read_to_string(dir.path().join("fig1.svg")).unwrap();
    assert_eq!(svg.matches(r#"data-series="c_12""#).count(), 1);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    assert_eq!(code(&["fig1", "--t-min", "-1"]), Some(2));
    assert_eq!(code(&["fig1", "--alpha", "abc"]), Some(2));
    assert_eq!(code(&["fig9"]), Some(2));
    assert_eq!(code(&["fig1", "--format", "csv+svg"]), Some(2));
    assert_eq!(
        code(&["witness", "--cluster", "trimer", "--spin", "3/2"]),
        Some(0)
    );
    assert_eq!(code(&["pq-scan", "--j", "-1"]), Some(2));
    // the bracket for the pair threshold overflows to an infinite temperature
    assert_eq!(code(&["witness", "--j", "1e308"]), Some(3));
}

#[test]
fn spin_one_tetramer_reports_without_pair_columns() {
    let out = bin().args(["witness", "--spin", "1"]).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let t = parse_csv("witness", &String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.columns().len(), 6);
}

#[test]
fn sweep_errors_name_grid_point() {
    let err = spinwitness::witness::sweep_alpha(&[0.5, -1.0], 1.0, false).unwrap_err();
    assert!(err.to_string().contains("alpha = -1"), "{err}");
}
