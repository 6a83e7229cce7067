use std::path::PathBuf;
use std::process::{Command, Output};

const HEADER: &str = "nu_over_omega0,ratio_quadrature,ratio_analytic,rel_err,rwa_warning";

fn zenoscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zenoscope"))
        .args(args)
        .env_remove("ZENOSCOPE_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zenoscope-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn rate_analytic_examples() {
    let quad = json(&zenoscope(&["rate", "--transition", "3D-1S", "--nu", "1e-3", "--method", "analytic"]));
    assert!((quad["ratio"].as_f64().unwrap() / 6.38 - 1.0).abs() < 1e-3);
    assert_eq!(quad["method"], "analytic_simple");
    assert_eq!(quad["rwa_warning"], false);
    let dip = json(&zenoscope(&["rate", "--transition", "2P-1S", "--nu", "1e-3", "--method", "analytic"]));
    assert_eq!(dip["ratio"].as_f64().unwrap(), 1.0);
}

#[test]
fn rate_document_fields() {
    let o = zenoscope(&["rate", "--transition", "4F-1S", "--nu", "1e-3"]);
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    for k in ["ratio", "gamma0", "method", "err_estimate", "rwa_warning"] {
        assert!(keys.contains(&k), "{keys:?}");
    }
    assert_eq!(v["method"], "quadrature");
    assert!(v["err_estimate"].as_f64().unwrap() < 1e-6);
    // 17 significant digits.
    let text = stdout(&o);
    let ratio = text.split("\"ratio\": ").nth(1).unwrap().split(',').next().unwrap();
    let mantissa = ratio.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{ratio}");
}

#[test]
fn rwa_flag_set_at_large_rate() {
    let v = json(&zenoscope(&["rate", "--transition", "2P-1S", "--nu", "0.2", "--method", "analytic"]));
    assert_eq!(v["rwa_warning"], true);
}

#[test]
fn unknown_transition_is_usage_error() {
    let o = zenoscope(&["rate", "--transition", "bogus", "--nu", "1e-3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    for name in ["2P-1S", "3D-1S", "4F-1S"] {
        assert!(err.contains(name), "{err}");
    }
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_arguments_exit_two() {
    for args in [
        &["rate", "--transition", "2P-1S", "--nu", "-1"][..],
        &["rate", "--transition", "2P-1S"][..],
        &["sweep", "--transition", "2P-1S", "--min", "1e-2", "--max", "1e-4"][..],
        &["sweep", "--transition", "2P-1S", "--min", "1e-4", "--max", "1e-2", "--points", "1"][..],
        &["sweep", "--transition", "2P-1S", "--min", "1e-4", "--max", "1e-2", "--jobs", "0"][..],
        &["oracle", "--mu", "1"][..],
        &["ca", "--precision", "1.5"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(zenoscope(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sweep_header_and_order() {
    let o = zenoscope(&["sweep", "--transition", "3D-1S", "--min", "1e-4", "--max", "1e-2", "--points", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 7);
    let nus: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(nus.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(rows[0][0], "1.00000000e-4");
    for r in &rows {
        assert_eq!(r.len(), 5);
        let (q, a, e): (f64, f64, f64) =
            (r[1].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!(((q - a).abs() / q - e).abs() < 1e-8);
        assert!(e < 0.02);
        assert_eq!(r[4], "false");
    }
}

#[test]
fn two_point_sweep_has_two_rows() {
    let o = zenoscope(&[
        "sweep",
        "--transition",
        "2P-1S",
        "--min",
        "1e-4",
        "--max",
        "1e-2",
        "--points",
        "2",
        "--spacing",
        "linear",
    ]);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn sweep_single_method_leaves_columns_empty() {
    let o = zenoscope(&[
        "sweep",
        "--transition",
        "4F-1S",
        "--min",
        "1e-3",
        "--max",
        "2e-3",
        "--points",
        "2",
        "--methods",
        "analytic",
    ]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "");
    assert!((row[2].parse::<f64>().unwrap() / 6.76e4 - 1.0).abs() < 0.01);
    assert_eq!(row[3], "");
}

#[test]
fn sweep_is_deterministic_across_job_counts() {
    let args = ["sweep", "--transition", "4F-1S", "--min", "1e-4", "--max", "1e-2", "--points", "9"];
    let one = zenoscope(&[&args[..], &["--jobs", "1"]].concat());
    let three = zenoscope(&[&args[..], &["--jobs", "3"]].concat());
    let env =
        Command::new(env!("CARGO_BIN_EXE_zenoscope")).args(args).env("ZENOSCOPE_JOBS", "2").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn config_file_transition() {
    let dir = scratch("config");
    let path = dir.join("3d.json");
    std::fs::write(&path, r#"{"character":"electric","n_g":1,"l_g":0,"n_e":3,"l_e":2}"#).unwrap();
    let p = path.to_str().unwrap();
    let from_file = json(&zenoscope(&["rate", "--transition", p, "--nu", "1e-3", "--method", "analytic"]));
    // CODATA α puts ω_X/ω0 within 1e-4 of the tabulated 411.1.
    let builtin =
        json(&zenoscope(&["rate", "--transition", "3D-1S", "--nu", "1e-3", "--method", "analytic"]));
    let (a, b) = (from_file["ratio"].as_f64().unwrap(), builtin["ratio"].as_f64().unwrap());
    assert!((a / b - 1.0).abs() < 1e-3, "{a} {b}");

    std::fs::write(&path, r#"{"character":"electric","n_g":1,"l_g":0,"n_e":3,"l_e":2,"bogus":1}"#).unwrap();
    assert_eq!(zenoscope(&["rate", "--transition", p, "--nu", "1e-3"]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn failed_points_are_reported() {
    // Leading coefficient switched off: the closed form is undefined, the integral is not.
    let dir = scratch("degenerate");
    let path = dir.join("4d.json");
    std::fs::write(
        &path,
        r#"{"character":"electric","n_g":1,"l_g":0,"n_e":4,"l_e":2,"degenerate":true,
            "terms":[{"J":2,"r":0,"D":0.0},{"J":2,"r":1,"D":1.0}]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let base = ["sweep", "--transition", p, "--min", "1e-4", "--max", "1e-3", "--points", "2"];
    let plain = zenoscope(&base);
    assert_eq!(plain.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&plain.stderr).contains("analytic"));
    let text = stdout(&plain);
    assert_eq!(text.lines().next(), Some(HEADER));
    for line in text.lines().skip(1) {
        let row: Vec<&str> = line.split(',').collect();
        assert!(row[1].parse::<f64>().unwrap() > 0.0);
        assert_eq!((row[2], row[3]), ("", ""));
    }

    let status = zenoscope(&[&base[..], &["--with-status"]].concat());
    let text = stdout(&status);
    assert_eq!(text.lines().next().unwrap(), format!("{HEADER},status"));
    for line in text.lines().skip(1) {
        let row: Vec<&str> = line.split(',').collect();
        assert_eq!(row.len(), 6);
        assert!(row[5].starts_with("analytic"), "{line}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn table1_is_tsv() {
    let o = zenoscope(&["table1"]);
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0], ["transition", "eta", "mu", "omega_x_over_omega0"]);
    assert_eq!(rows[2], ["3D-1S", "3", "6", "411.1"]);
    assert!(rows.iter().all(|r| r.len() == 4));
}

#[test]
fn table1_alpha_override() {
    let a = 0.00729735 * 2.0;
    let o = zenoscope(&["table1", "--alpha", &a.to_string()]);
    let text = stdout(&o);
    let ratio: f64 = text.lines().nth(1).unwrap().split('\t').nth(3).unwrap().parse().unwrap();
    // ω_X/ω0 ∝ 1/α.
    assert!((ratio / (548.1 / 2.0) - 1.0).abs() < 2e-4, "{ratio}");
}

#[test]
fn figure2_stdout_blocks_and_files() {
    let o = zenoscope(&["figure2", "--points", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let marks: Vec<&str> = text.lines().filter(|l| l.starts_with('#')).collect();
    assert_eq!(marks, ["# 2P-1S", "# 3D-1S", "# 4F-1S"]);

    let dir = scratch("figure2");
    let o = zenoscope(&["figure2", "--points", "4", "--out-dir", dir.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let blocks: Vec<&str> = text.split("\n\n").collect();
    for (name, block) in ["2P-1S", "3D-1S", "4F-1S"].iter().zip(blocks) {
        let file = std::fs::read_to_string(dir.join(format!("figure2_{name}.csv"))).unwrap();
        assert_eq!(block.trim_end().strip_prefix(&format!("# {name}\n")).unwrap(), file.trim_end());
        assert_eq!(file.lines().next(), Some(HEADER));
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn oracle_document() {
    let o = zenoscope(&["oracle", "--eta", "1", "--nu", "1e-3", "--n-modes", "2000"]);
    let v = json(&o);
    let (or, q) = (v["ratio_oracle"].as_f64().unwrap(), v["ratio_quadrature"].as_f64().unwrap());
    assert!((or - 1.0).abs() < 0.03);
    assert!(((or - q).abs() / q - v["rel_diff"].as_f64().unwrap()).abs() < 1e-15);
    let again = zenoscope(&["oracle", "--eta", "1", "--nu", "1e-3", "--n-modes", "2000"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn oracle_band_precondition() {
    // 10³ν reaches past what 200 modes can resolve without recurrence.
    let o = zenoscope(&["oracle", "--nu", "1e-2", "--n-modes", "200"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ca_document() {
    let v = json(&zenoscope(&["ca"]));
    assert!((v["ratio_sq"].as_f64().unwrap() / 6.6e6 - 1.0).abs() < 0.02);
    assert!((v["required_nu"].as_f64().unwrap() / 4e6 - 1.0).abs() < 0.1);
    let strict = json(&zenoscope(&["ca", "--prefactor-a", "10"]));
    let ratio = strict["required_nu"].as_f64().unwrap() / v["required_nu"].as_f64().unwrap();
    assert!((ratio - 0.1).abs() < 1e-12);
}
