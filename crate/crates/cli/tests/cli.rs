use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use relengine::engine::EffectiveEngine;
use relengine_cli::config::Settings;
use relengine_cli::engine::{engine_row, EngineSetup, RowKind};
use relengine_cli::fcs::report;
use relengine_cli::optimize::{optimize_row, OptimizeSetup};
use relengine_cli::output::VERSION_LINE;
use relengine_cli::teff::teff_row;

fn relengine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relengine"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn shipped(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn records(text: &str) -> (Vec<String>, Vec<csv::StringRecord>) {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader.records().map(|r| r.unwrap()).collect();
    (header, rows)
}

fn num(field: &str) -> Option<f64> {
    (!field.is_empty()).then(|| field.parse().unwrap())
}

fn close(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0),
        _ => false,
    }
}

#[test]
fn headers_are_exact() {
    let cases = [
        ("teff", "omega,velocity,beta,t_eff,t_eff_over_t"),
        ("engine", "omega_ratio,scenario,w_ext,q_h,q_c,sigma,eta_or_blank,mode"),
        (
            "optimize",
            "scan_value,eta_star,eta_ca_rest,eta_ca_eff,eta_c_rest,eta_c_eff,optimal_ratio,max_work,mode",
        ),
        ("fcs", "kind,label,probability,w,q_h,value,finite_difference,abs_diff"),
    ];
    for (cmd, header) in cases {
        let out = relengine(&[cmd]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let text = stdout(&out);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(VERSION_LINE));
        assert_eq!(lines.next(), Some(header));
    }
}

#[test]
fn teff_round_trip() {
    let text = stdout(&relengine(&["teff", "--config", &shipped("teff_map.json")]));
    let (_, rows) = records(&text);
    assert_eq!(rows.len(), 40 * 5);
    for r in &rows {
        let (w, v, b) = (num(&r[0]).unwrap(), num(&r[1]).unwrap(), num(&r[2]).unwrap());
        let fresh = teff_row(w, v, b).unwrap();
        assert!(close(num(&r[3]), Some(fresh.t_eff)));
        assert!(close(num(&r[4]), Some(fresh.t_eff_over_t)));
    }
}

#[test]
fn engine_round_trip() {
    let path = shipped("engine_ratio.json");
    let text = stdout(&relengine(&["engine", "--config", &path]));
    let setup = EngineSetup::from_settings(&Settings::load(path.as_ref()).unwrap()).unwrap();
    let (_, rows) = records(&text);
    assert_eq!(rows.iter().filter(|r| &r[1] == "boundary").count(), 1);
    for r in &rows {
        let kind: RowKind = r[1].parse().unwrap();
        let fresh = engine_row(&setup, num(&r[0]).unwrap(), kind).unwrap();
        for (i, value) in [fresh.w_ext, fresh.q_h, fresh.q_c, fresh.sigma].into_iter().enumerate() {
            assert!(close(num(&r[2 + i]), Some(value)), "{r:?}");
        }
        assert!(close(num(&r[6]), fresh.eta_or_blank));
        assert_eq!(&r[7], fresh.mode);
        assert!(num(&r[5]).unwrap() >= -1e-12);
    }
}

#[test]
fn optimize_round_trip() {
    for name in ["optimize_high_t.json", "optimize_low_t.json", "optimize_numeric.json"] {
        let path = shipped(name);
        let text = stdout(&relengine(&["optimize", "--config", &path]));
        let (setup, _) = OptimizeSetup::from_settings(&Settings::load(path.as_ref()).unwrap()).unwrap();
        let (_, rows) = records(&text);
        assert!(!rows.is_empty());
        for r in &rows {
            let fresh = optimize_row(&setup, num(&r[0]).unwrap()).unwrap();
            let expected = [
                fresh.eta_star,
                Some(fresh.eta_ca_rest),
                Some(fresh.eta_ca_eff),
                Some(fresh.eta_c_rest),
                Some(fresh.eta_c_eff),
                fresh.optimal_ratio,
                fresh.max_work,
            ];
            for (i, value) in expected.into_iter().enumerate() {
                assert!(close(num(&r[1 + i]), value), "{name}: {r:?}");
            }
            if &r[8] == "engine" {
                assert!(num(&r[1]).unwrap() <= num(&r[5]).unwrap() + 1e-12);
            }
        }
    }
}

#[test]
fn fcs_round_trip_and_footer() {
    let path = shipped("fcs_point.json");
    let text = stdout(&relengine(&["fcs", "--config", &path]));
    let settings = Settings::load(path.as_ref()).unwrap();
    let config = settings
        .engine_config(settings.temperature_mode_or(relengine::TemperatureMode::Full).unwrap())
        .unwrap();
    let fresh = report(&EffectiveEngine::resolve(&config).unwrap());
    let (_, rows) = records(&text);
    assert_eq!(rows.len(), fresh.len());
    for (r, f) in rows.iter().zip(&fresh) {
        assert_eq!(&r[0], f.kind);
        assert_eq!(&r[1], f.label);
        let expected = [f.probability, f.w, f.q_h, f.value, f.finite_difference, f.abs_diff];
        for (i, value) in expected.into_iter().enumerate() {
            assert!(close(num(&r[2 + i]), value), "{r:?}");
        }
    }
    let footer = rows.last().unwrap();
    assert_eq!(&footer[1], "probability_sum");
    assert!((num(&footer[5]).unwrap() - 1.0).abs() < 1e-15);
    for r in rows.iter().filter(|r| r[1].starts_with("mean")) {
        assert!(num(&r[7]).unwrap() <= 1e-7);
    }
}

#[test]
fn json_mirrors_csv() {
    let path = shipped("engine_ratio.json");
    let csv_text = stdout(&relengine(&["engine", "--config", &path]));
    let json_text = stdout(&relengine(&["engine", "--config", &path, "--format", "json"]));
    let (header, rows) = records(&csv_text);
    let json: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(&json_text).unwrap();
    assert_eq!(json.len(), rows.len());
    for (obj, r) in json.iter().zip(&rows) {
        let keys: Vec<&String> = obj.keys().collect();
        let mut sorted_header: Vec<&String> = header.iter().collect();
        sorted_header.sort();
        assert_eq!(keys, sorted_header);
        for (name, field) in header.iter().zip(r.iter()) {
            match &obj[name] {
                serde_json::Value::Null => assert!(field.is_empty()),
                serde_json::Value::String(s) => assert_eq!(s, field),
                serde_json::Value::Number(n) => assert_eq!(n.as_f64().unwrap(), field.parse::<f64>().unwrap()),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fcs.csv");
    let out = relengine(&["fcs", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read(&file).unwrap(), relengine(&["fcs", "--out", "-"]).stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    fs::write(&file, r#"{"beta": 2.0, "velocities": [0.5], "sweep_values": [1.0]}"#).unwrap();
    let from_file = stdout(&relengine(&["teff", "--config", file.to_str().unwrap()]));
    let (_, rows) = records(&from_file);
    assert_eq!(&rows[0][2], "2.0");
    let overridden = stdout(&relengine(&["teff", "--config", file.to_str().unwrap(), "--beta", "3"]));
    let (_, rows) = records(&overridden);
    assert_eq!(&rows[0][2], "3.0");
    assert_eq!(&rows[0][1], "0.5");
}

#[test]
fn validation_errors_exit_2_with_one_line_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, r#"{"omega_z": 1.0}"#).unwrap();
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["engine", "--scenarios", "sideways"], "scenarios"),
        (vec!["teff", "--velocities", "0.5,1.0"], "velocities"),
        (vec!["teff", "--sweep-count", "1"], "sweep_count"),
        (
            vec!["teff", "--sweep-start", "0", "--sweep-spacing", "log"],
            "sweep_start",
        ),
        (vec!["fcs", "--beta-b", "-2"], "beta_b"),
        (vec!["optimize", "--regime", "medium"], "regime"),
        (vec!["optimize", "--format", "xml"], "format"),
        (vec!["fcs", "--config", unknown.to_str().unwrap()], "omega_z"),
        (vec!["fcs", "--config", "/nonexistent/config.json"], "config"),
    ];
    for (args, field) in cases {
        let out = relengine(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        assert!(err.contains(field), "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn whole_grid_outside_window_exits_3() {
    let out = relengine(&["optimize", "--beta-a", "2", "--beta-b", "1", "--sweep-values", "0,0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn partially_outside_grid_keeps_blank_rows() {
    // hot qubit moving fast enough cools it below the cold bath
    let text = stdout(&relengine(&[
        "optimize",
        "--sweep-parameter",
        "velocity_a",
        "--sweep-values",
        "0,0.99",
    ]));
    let (_, rows) = records(&text);
    assert!(num(&rows[0][1]).is_some());
    assert!(rows[1][1].is_empty() && rows[1][6].is_empty() && rows[1][7].is_empty());
    assert_ne!(&rows[1][8], "engine");
}

#[test]
fn help_documents_precedence_and_version() {
    let help = stdout(&relengine(&["optimize", "--help"]));
    assert!(help.contains("defaults < --config file < flags"));
    let version = stdout(&relengine(&["--version"]));
    assert!(version.contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn teff_rest_point_is_one_and_plateau_holds() {
    let text = stdout(&relengine(&["teff", "--velocities", "0", "--sweep-values", "1"]));
    let (_, rows) = records(&text);
    assert_eq!(&rows[0][4], "1.0");
    let text = stdout(&relengine(&[
        "teff",
        "--velocities",
        "0.8",
        "--beta",
        "1",
        "--sweep-values",
        "0.001",
    ]));
    let (_, rows) = records(&text);
    assert!((num(&rows[0][4]).unwrap() - 0.8240).abs() < 1e-4);
}
