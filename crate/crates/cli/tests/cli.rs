//! End-to-end runs of the binary: output shapes, exit codes, stability.

use std::path::Path;
use std::process::{Command, Output};

fn univfn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univfn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("terminated by exit, not signal")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn table_json(dims: &[usize], values: &[u64]) -> String {
    serde_json::json!({
        "dims": dims,
        "values": values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
    .to_string()
}

#[test]
fn codec_examples() {
    for (args, expect) in [
        (&["pair", "3", "5"][..], "39\n"),
        (&["pair", "1", "1"], "3\n"),
        (&["unpair", "39"], "3 5\n"),
        (&["unpair", "0"], "0 0\n"),
        (&["rho", "509", "0"], "7\n"),
        (&["rho", "0", "10"], "0\n"),
    ] {
        let out = univfn(args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert_eq!(stdout(&out), expect, "{args:?}");
    }
}

#[test]
fn synth_verify_tamper_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.json");
    let witness = dir.path().join("w.json");
    write(&table, &table_json(&[4, 4], &(0..16).map(|v| v * 3 + 1).collect::<Vec<_>>()));

    let synth = univfn(&[
        "synth",
        "two",
        "--table",
        table.to_str().unwrap(),
        "--out",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code(&synth), 0, "stderr: {}", stderr(&synth));
    let report: serde_json::Value = serde_json::from_str(&stdout(&synth)).unwrap();
    assert_eq!(report["checked"], 16);
    assert_eq!(report["mismatches"].as_array().unwrap().len(), 0);

    let verify = univfn(&["verify", "--table", table.to_str().unwrap(), "--witness", witness.to_str().unwrap()]);
    assert_eq!(code(&verify), 0);

    // Byte stability: a second run reproduces both streams exactly.
    let synth2 = univfn(&[
        "synth",
        "two",
        "--table",
        table.to_str().unwrap(),
        "--out",
        dir.path().join("w2.json").to_str().unwrap(),
    ]);
    assert_eq!(synth2.stdout, synth.stdout);
    assert_eq!(
        std::fs::read(&witness).unwrap(),
        std::fs::read(dir.path().join("w2.json")).unwrap()
    );
    let verify2 = univfn(&["verify", "--table", table.to_str().unwrap(), "--witness", witness.to_str().unwrap()]);
    assert_eq!(verify2.stdout, verify.stdout);

    // Zero one stored witness value; the replay must expose it.
    let mut syn: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    syn["witnesses"]["maps"][0]["map"]["values"][1] = "0".into();
    write(&witness, &syn.to_string());
    let tampered = univfn(&["verify", "--table", table.to_str().unwrap(), "--witness", witness.to_str().unwrap()]);
    assert_eq!(code(&tampered), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&tampered)).unwrap();
    assert_eq!(report["checked"], 16);
    assert!(!report["mismatches"].as_array().unwrap().is_empty());
    let first = &report["mismatches"][0];
    assert!(first["coords"].is_array());
    assert!(first["expected"].is_string());
    assert!(first["got"].is_string());
}

#[test]
fn malformed_inputs_are_user_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("t.json");
    write(&good, &table_json(&[2, 2], &[1, 2, 3, 4]));
    let broken = dir.path().join("broken.json");
    write(&broken, "{]");
    let short = dir.path().join("short.json");
    write(&short, &table_json(&[2, 2], &[1, 2, 3]));

    let cases: Vec<Vec<&str>> = vec![
        vec!["pair", "3", "x"],
        vec!["pair", "3", "-1"],
        vec!["unpair", ""],
        vec!["synth", "two", "--table", "/nonexistent/t.json"],
        vec!["synth", "two", "--table", broken.to_str().unwrap()],
        vec!["synth", "two", "--table", short.to_str().unwrap()],
        vec!["synth", "frobnicate", "--table", good.to_str().unwrap()],
        vec!["synth", "sigma", "--table", good.to_str().unwrap()],
        vec!["synth", "product", "--table", good.to_str().unwrap()],
        vec!["synth", "two", "--table", good.to_str().unwrap(), "--table2", good.to_str().unwrap()],
        vec!["synth", "dim3", "--table", good.to_str().unwrap()],
        vec!["verify", "--table", good.to_str().unwrap(), "--witness", broken.to_str().unwrap()],
    ];
    for args in cases {
        let out = univfn(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty(), "{args:?} should explain itself");
    }
}

#[test]
fn non_covering_sigma_refuses_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.json");
    write(&table, &table_json(&[2, 2], &[1, 2, 3, 4]));
    let sigma = dir.path().join("s.json");
    write(&sigma, r#"{"n":2,"family":[[0]]}"#);

    let out = univfn(&[
        "synth",
        "sigma",
        "--table",
        table.to_str().unwrap(),
        "--sigma",
        sigma.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).is_empty());
    let cert: serde_json::Value = serde_json::from_str(&stderr(&out)).unwrap();
    assert_eq!(cert["verdict"], "TriviallyFalse");
    assert_eq!(cert["certificate"]["uncovered"], 1);
}

#[test]
fn classify_reports_all_three_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");

    write(&path, r#"{"n":3,"family":[[0,1],[1,2]]}"#);
    let out = univfn(&["classify", "--sigma", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "EquivalentTo");
    assert_eq!(v["m"], 1);
    assert_eq!(v["certificate"]["excluded_set"], serde_json::json!([0, 2]));

    write(&path, r#"{"n":2,"family":[[0,1]]}"#);
    let out = univfn(&["classify", "--sigma", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "TriviallyTrue");

    write(&path, r#"{"n":2,"family":[[1]]}"#);
    let out = univfn(&["classify", "--sigma", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "classification itself succeeds");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "TriviallyFalse");
    assert_eq!(v["certificate"]["uncovered"], 0);
}

#[test]
fn additive_reports_carry_freeness() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.json");
    write(&table, &table_json(&[2, 2], &[9, 8, 7, 6]));
    let out = univfn(&["synth", "additive", "--table", table.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["carry_free"], true);
}

#[test]
fn product_covers_two_tables_at_once() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = dir.path().join("a.json");
    let t2 = dir.path().join("b.json");
    write(&t1, &table_json(&[2, 2], &[1, 2, 3, 4]));
    write(&t2, &table_json(&[2, 2], &[5, 6, 7, 8]));
    let out = univfn(&[
        "synth",
        "product",
        "--table",
        t1.to_str().unwrap(),
        "--table2",
        t2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["checked"], 4);
    assert_eq!(report["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn every_synthesis_kind_self_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let square = dir.path().join("sq.json");
    write(&square, &table_json(&[3, 3], &[4, 0, 2, 9, 9, 1, 5, 3, 8]));
    let cube = dir.path().join("cube.json");
    write(&cube, &table_json(&[2, 2, 2], &[0, 1, 2, 3, 4, 5, 6, 7]));
    let tess = dir.path().join("tess.json");
    write(&tess, &table_json(&[2, 2, 2, 2], &(0..16).collect::<Vec<_>>()));
    let sigma = dir.path().join("s.json");
    write(&sigma, r#"{"n":2,"family":[[0],[1]]}"#);

    for (kind, table, cells, extra) in [
        ("two", &square, 9, None),
        ("single", &square, 9, None),
        ("dim3", &cube, 8, None),
        ("dimn", &tess, 16, None),
        ("s42", &tess, 16, None),
        ("s32", &cube, 8, None),
        ("additive", &square, 9, None),
        ("sigma", &square, 9, Some(&sigma)),
    ] {
        let mut args = vec!["synth", kind, "--table", table.to_str().unwrap()];
        if let Some(s) = extra {
            args.push("--sigma");
            args.push(s.to_str().unwrap());
        }
        let out = univfn(&args);
        assert_eq!(code(&out), 0, "{kind}: {}", stderr(&out));
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["checked"], cells, "{kind}");
        assert_eq!(report["mismatches"].as_array().unwrap().len(), 0, "{kind}");
    }
}

#[test]
fn verify_rejects_structurally_wrong_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.json");
    let big = dir.path().join("big.json");
    let witness = dir.path().join("w.json");
    write(&small, &table_json(&[2, 2], &[1, 2, 3, 4]));
    write(&big, &table_json(&[3, 3], &[1, 2, 3, 4, 5, 6, 7, 8, 9]));

    let synth = univfn(&[
        "synth",
        "two",
        "--table",
        small.to_str().unwrap(),
        "--out",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code(&synth), 0);

    let out = univfn(&["verify", "--table", big.to_str().unwrap(), "--witness", witness.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "axis mismatch is a user error");
    assert!(!stderr(&out).is_empty());
}
