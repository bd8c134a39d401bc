use std::process::{Command, Output};

use gpchain::output::parse_csv;

fn gpchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn free_qubit_sweep_to_stdout() {
    let o = gpchain(&["sweep", "--axis", "beta", "--start", "0", "--stop", "pi", "--points", "5", "--g", "0", "-N", "51"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let parsed = parse_csv(&stdout(&o)).unwrap();
    assert_eq!(parsed.rows.len(), 5);
    for r in &parsed.rows {
        assert!((r.phi - std::f64::consts::PI * (1.0 + r.axis.cos())).abs() < 1e-9);
        assert_eq!(r.overlay, None);
    }
    assert_eq!(parsed.get("N"), Some("51"));
    assert_eq!(parsed.get("axis"), Some("beta"));
}

#[test]
fn expressions_and_overlays() {
    let o = gpchain(&[
        "sweep",
        "--axis",
        "alpha",
        "--start",
        "-0.2",
        "--stop",
        "0.2",
        "--points",
        "3",
        "--overlay",
        "beta",
        "--overlay-values",
        "pi/5,4pi/5",
        "--eta",
        "2pi/3",
        "-N",
        "31",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let parsed = parse_csv(&stdout(&o)).unwrap();
    assert_eq!(parsed.rows.len(), 6);
    assert_eq!(parsed.rows[1].overlay, Some(4.0 * std::f64::consts::PI / 5.0));
    assert_eq!(parsed.get("overlay"), Some("beta"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# weak coupling\ng = 0\nN = 41\naxis = beta\nstart = 0\nstop = pi\npoints = 3\n").unwrap();
    let out = dir.path().join("phase.csv");
    let plot = dir.path().join("phase.svg");
    let o = gpchain(&[
        "--config",
        cfg.to_str().unwrap(),
        "sweep",
        "-N",
        "21",
        "--out",
        out.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let parsed = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed.get("N"), Some("21"));
    assert_eq!(parsed.get("g"), Some("0.0000000000000000e0"));
    assert_eq!(parsed.rows.len(), 3);
    let svg = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        vec!["sweep", "--axis", "delta"],
        vec!["sweep", "--axis", "beta", "--start", "0", "--stop", "4"],
        vec!["approx", "--lambda", "1"],
        vec!["decoherence", "--g", "2pi/"],
        vec!["figure", "fig9"],
        vec!["verify", "--level", "medium"],
        vec!["frobnicate"],
        vec!["--config", "/nonexistent/run.conf", "verify"],
    ] {
        let o = gpchain(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn quick_verification_passes() {
    let o = gpchain(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS |F(0)| = 1"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn decoherence_series_output() {
    let o = gpchain(&["decoherence", "-N", "21", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "t,fmod");
    assert_eq!(rows.len(), 12);
    assert!(rows[1].ends_with(",1.0000000000000000e0"));
}

#[test]
fn approx_report() {
    let o = gpchain(&["approx", "--g", "0.001", "--beta", "pi/2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("cutoff=250\n"));
    assert!(text.contains(&format!("approx_phi={:.16e}\n", std::f64::consts::PI)));
}

#[test]
fn figure_preset_with_reduced_grid() {
    let o = gpchain(&["figure", "fig3", "--points", "5", "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let parsed = parse_csv(&stdout(&o)).unwrap();
    assert_eq!(parsed.rows.len(), 15);
    assert_eq!(parsed.get("overlay"), Some("alpha"));
    assert_eq!(parsed.get("axis"), Some("lambda"));
}
