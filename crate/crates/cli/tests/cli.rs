use std::path::PathBuf;
use std::process::{Command, Output};

fn htverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_htverify")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("htverify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Drops the `wall_time` fields, the only nondeterministic part of a report.
fn without_wall_time(text: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    for r in v.as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("wall_time");
    }
    v.to_string()
}

#[test]
fn table_at_two_passes_and_shows_the_squares() {
    let o = htverify(&["table", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("j * j = 2 +0i +0j +0k"), "{out}");
    assert!(out.contains("k * k = 2 +0i +0j +0k"), "{out}");
    assert!(out.contains("i * i = -1"), "{out}");
}

#[test]
fn verify_writes_a_passing_report() {
    let path = tmp("verify.json");
    let o = htverify(&["verify", "--t", "-1", "--seed", "7", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 11);
    for r in reports {
        assert_eq!(r["t"].as_f64(), Some(-1.0));
        for e in r["entries"].as_array().unwrap() {
            assert_eq!(e["pass"], true, "{e}");
            for key in ["name", "tolerance", "observed"] {
                assert!(e.get(key).is_some(), "{e}");
            }
        }
    }
}

#[test]
fn reports_are_reproducible_under_a_seed() {
    let run = |name: &str| {
        let path = tmp(name);
        let o = htverify(&["verify", "--t", "0.5", "--seed", "11", "--samples", "10", "--json", path.to_str().unwrap()]);
        assert!(o.status.code().is_some());
        std::fs::read_to_string(&path).unwrap()
    };
    let (a, b) = (run("repro_a.json"), run("repro_b.json"));
    assert_eq!(without_wall_time(&a), without_wall_time(&b));
    let strip = |s: &str| s.lines().filter(|l| !l.contains("wall_time")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn fueter_sweep_prints_the_worst_residual() {
    let path = tmp("fueter.json");
    let o = htverify(&["fueter", "--alpha", "2,1,1", "--t", "1.5", "--samples", "100", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("max residual"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for row in v.as_array().unwrap() {
        assert_eq!(row["t"].as_f64(), Some(1.5));
        assert!(row["max_residual"].as_f64().unwrap() <= 1e-8, "{row}");
    }
}

#[test]
fn single_point_commands_pass() {
    let alpha = r#"{"t": -0.5, "a": [0.2, 0.1], "b": [0.1, 0.3]}"#;
    for adjoint in ["circled", "bracket"] {
        let o = htverify(&["blaschke", "--adjoint", adjoint, "--alpha", alpha]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let o = htverify(&["norm", r#"{"t": 2, "a": [1, 0.5], "b": [0.3, -0.2]}"#]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let pts = r#"[{"t": 1, "a": [0.3, 0.1], "b": [0.1, 0]}, {"t": 1, "a": [-0.2, 0.3], "b": [0, 0.1]}]"#;
    let o = htverify(&["interp", "--points", pts]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = htverify(&["realize", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_with_two() {
    for args in [
        vec!["nonsense"],
        vec!["verify", "--t", "abc"],
        vec!["verify", "--t", "0"],
        vec!["norm", "{not json"],
        vec!["fueter", "--alpha", "1,2"],
        vec!["blaschke", "--adjoint", "sideways", "--alpha", "{}"],
        vec!["norm", r#"{"t": 1, "a": [1, 0], "b": [0, 0]}"#, "--t", "2"],
    ] {
        assert_eq!(htverify(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_checks_exit_with_one() {
    let o = htverify(&["verify", "--t", "2", "--samples", "5", "--tol-scale", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}
