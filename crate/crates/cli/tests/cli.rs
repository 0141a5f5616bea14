use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use krausforge::bench::CSV_HEADER;
use krausforge::kraus::io::{extraction_from_json, kraus_from_json};
use krausforge::model::bundled_model_json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krausforge"))
        .args(args)
        .env_remove("KRAUSFORGE_THREADS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_model(dir: &Path, edit: impl FnOnce(&mut serde_json::Value)) -> String {
    let mut v: serde_json::Value = serde_json::from_str(bundled_model_json()).unwrap();
    edit(&mut v);
    let path = dir.join("model.json");
    fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn no_arguments_prints_usage() {
    let o = run(&[]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("Usage: krausforge"));
}

#[test]
fn every_subcommand_has_help() {
    let cases: [(&str, &[&str]); 5] = [
        (
            "synth",
            &["--model", "--tau", "--n", "--quadrature", "--out"],
        ),
        (
            "sweep-time",
            &[
                "--model",
                "--methods",
                "--tau-min",
                "--tau-max",
                "--points",
                "--out",
            ],
        ),
        (
            "sweep-n",
            &["--model", "--taus", "--n-min", "--n-max", "--out"],
        ),
        ("verify", &["--model", "--tau", "--seed", "--tol"]),
        ("extract", &["--model", "--tau", "--cutoff", "--out"]),
    ];
    for (sub, flags) in cases {
        let o = run(&[sub, "--help"]);
        assert_eq!(code(&o), 0, "{sub}");
        let text = stdout(&o);
        for flag in flags.iter().chain(&["--threads"]) {
            assert!(text.contains(flag), "{sub} help lacks {flag}");
        }
    }
}

#[test]
fn unknown_flags_and_subcommands_are_usage_errors() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["synth", "--tau", "1"])), 1);
    assert_eq!(code(&run(&["verify", "--bogus"])), 1);
}

#[test]
fn synth_writes_dump_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kraus.json");
    let model = write_model(dir.path(), |_| {});
    let o = run(&[
        "synth",
        "--model",
        &model,
        "--tau",
        "1.0",
        "--n",
        "10",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let ks = kraus_from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(ks.len(), 11);
    let summary = stdout(&o);
    let field = |key: &str| -> f64 {
        let line = summary.lines().find(|l| l.starts_with(key)).unwrap();
        line.split_once(": ").unwrap().1.parse().unwrap()
    };
    assert!(field("closure_deficit") < 2e-3);
    assert!(field("distance_first_order") < 1e-3);
    assert!(field("distance_exact") < 3e-3);
}

#[test]
fn synth_trapezoid_rule() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let o = run(&[
        "synth",
        "--tau",
        "0.5",
        "--n",
        "4",
        "--quadrature",
        "trapezoid-interior",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(fs::read_to_string(&out)
        .unwrap()
        .contains("trapezoid-interior"));
}

#[test]
fn corrupted_model_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), |v| {
        v["hamiltonian"][0][1] = serde_json::json!([3.0, 1.0])
    });
    let o = run(&["verify", "--model", &model]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("hamiltonian[0][1]"), "{}", stderr(&o));

    let model = write_model(dir.path(), |v| {
        v["channels"][0]["rate"] = serde_json::json!(-1.0)
    });
    let o = run(&["verify", "--model", &model]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("channels[0].rate"), "{}", stderr(&o));

    let o = run(&["verify", "--model", p(&dir.path().join("missing.json"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn failed_run_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), |v| v["dimension"] = serde_json::json!(4));
    let out = dir.path().join("kraus.json");
    let o = run(&["synth", "--model", &model, "--tau", "1", "--out", p(&out)]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());

    fs::write(&out, "previous").unwrap();
    let o = run(&["synth", "--model", &model, "--tau", "1", "--out", p(&out)]);
    assert_eq!(code(&o), 2);
    assert_eq!(fs::read_to_string(&out).unwrap(), "previous");
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);

    let o = run(&[
        "synth",
        "--tau",
        "1",
        "--out",
        p(&dir.path().join("no/such/dir/k.json")),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bad_flag_values_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    for args in [
        vec!["sweep-time", "--methods", "dphi,taylor", "--out", p(&out)],
        vec!["sweep-time", "--methods", "kraus:0", "--out", p(&out)],
        vec!["sweep-time", "--points", "0", "--out", p(&out)],
        vec!["sweep-time", "--tau-min", "-1", "--out", p(&out)],
        vec!["sweep-n", "--n-min", "5", "--n-max", "2", "--out", p(&out)],
        vec!["synth", "--tau", "0", "--out", p(&out)],
        vec!["synth", "--tau", "1", "--n", "0", "--out", p(&out)],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 1, "{args:?}: {}", stderr(&o));
    }
    assert!(!out.exists());

    let o = Command::new(env!("CARGO_BIN_EXE_krausforge"))
        .args(["sweep-n", "--out", p(&out)])
        .env("KRAUSFORGE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn sweeps_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let o = run(&[
        "sweep-n",
        "--taus",
        "0.1,1",
        "--n-max",
        "3",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("0.1,kraus,1,"));
    assert!(lines[6].starts_with("1.0,kraus,3,"));

    let out = dir.path().join("fig1.csv");
    let o = run(&[
        "sweep-time",
        "--methods",
        "exact,first_order",
        "--points",
        "3",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.contains("\n0.01,exact,,0.0\n"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("all 12 checks passed"));

    let o = run(&["verify", "--tol", "0"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("FAIL"));
    assert!(stderr(&o).contains("checks failed"));
}

#[test]
fn extract_writes_canonical_kraus() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ex.json");
    let o = run(&["extract", "--tau", "1", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (dim, cutoff, terms) = extraction_from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((dim, cutoff), (3, 1e-10));
    assert!(!terms.is_empty() && terms.len() <= 9);
    assert!(terms.iter().all(|t| t.weight > 0.0));
    let trace: f64 = terms.iter().map(|t| t.weight).sum();
    assert!((trace - 3.0).abs() < 1e-9);
}
