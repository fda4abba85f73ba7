use std::path::PathBuf;
use std::process::{Command, Output};

use galdef::ledger::WilesLedger;
use galdef::templates::{mutations, theorem_a_p5};
use serde_json::Value;

fn galdef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galdef")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn templates_exit_zero() {
    for name in ["theorem_a_p5", "theorem_b_p5"] {
        let o = galdef(&["check-hypotheses", &fixture(name)]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
    }
}

#[test]
fn mutations_exit_with_their_condition() {
    for m in mutations() {
        let want = match m.name.split('_').next().unwrap() {
            "c1" => 5,
            "c2" => 6,
            "c3" => 3,
            "c4" => 4,
            "b" => 7,
            "odd" => 8,
            other => panic!("{other}"),
        };
        let o = galdef(&["check-hypotheses", &fixture(m.name)]);
        assert_eq!(code(&o), want, "{}", m.name);
    }
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&galdef(&["check-hypotheses", missing.to_str().unwrap()])), 2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&galdef(&["check-hypotheses", bad.to_str().unwrap()])), 2);

    let mut v: Value = serde_json::to_value(theorem_a_p5()).unwrap();
    v.as_object_mut().unwrap().remove("schema_version");
    std::fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(code(&galdef(&["check-hypotheses", bad.to_str().unwrap()])), 2);

    v["schema_version"] = 99.into();
    std::fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(code(&galdef(&["check-hypotheses", bad.to_str().unwrap()])), 2);
}

#[test]
fn usage_errors() {
    let a = fixture("theorem_a_p5");
    assert_eq!(code(&galdef(&["--format", "yaml", "check-hypotheses", &a])), 64);
    assert_eq!(code(&galdef(&["frobnicate"])), 64);
    assert_eq!(code(&galdef(&[])), 64);
    assert_eq!(code(&galdef(&["cohomology", "--group", "sl3", "--p", "5"])), 64);
    assert_eq!(code(&galdef(&["--help"])), 0);
    assert_eq!(code(&galdef(&["--version"])), 0);
}

#[test]
fn json_is_byte_stable() {
    for args in [
        vec!["--format", "json", "check-hypotheses", "THEOREM_A"],
        vec!["--format", "json", "cohomology", "--group", "sl2", "--p", "5"],
        vec!["--format", "json", "tame-ring", "--p", "5", "--n", "2", "--q", "19", "--alpha", "1", "--enumerate"],
        vec!["--format", "json", "verify", "--suite", "euler"],
    ] {
        let a = fixture("theorem_a_p5");
        let args: Vec<&str> = args.iter().map(|s| if *s == "THEOREM_A" { a.as_str() } else { s }).collect();
        let first = galdef(&args);
        let second = galdef(&args);
        assert_eq!(code(&first), 0, "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        let v: Value = serde_json::from_slice(&first.stdout).unwrap();
        assert_eq!(v["schema_version"], 1);
    }
}

#[test]
fn text_has_one_line_per_verdict() {
    let out = stdout(&galdef(&["check-hypotheses", &fixture("theorem_a_p5")]));
    for label in ["C1 ", "C2 ", "C3 ", "C4 ", "B-shape ", "odd "] {
        assert_eq!(out.lines().filter(|l| l.starts_with(label)).count(), 1, "{label}\n{out}");
    }
    assert!(out.lines().any(|l| l == "delta = 0"), "{out}");
}

#[test]
fn ledger_round_trip_through_delta() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = galdef(&["--format", "json", "-o", report.to_str().unwrap(), "check-hypotheses", &fixture("theorem_a_p5")]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let ledger: WilesLedger = serde_json::from_value(v["ledger"].clone()).unwrap();
    assert_eq!(ledger.delta, 0);

    let rows = dir.path().join("ledger.json");
    std::fs::write(&rows, ledger.to_json_string()).unwrap();
    let o = galdef(&["--format", "json", "delta", rows.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let back = WilesLedger::from_json_str(&stdout(&o)).unwrap();
    assert_eq!(back, ledger);

    // a scenario is accepted directly
    let o = galdef(&["--format", "json", "delta", &fixture("theorem_a_p5")]);
    assert_eq!(WilesLedger::from_json_str(&stdout(&o)).unwrap(), ledger);
}

#[test]
fn delta_rows_and_dual_selmer() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.json");
    std::fs::write(&rows, r#"{"rows": [{"label": "p", "tag": "AtP", "tangent_dim": 1, "h0_dim": 0}]}"#).unwrap();
    let r = rows.to_str().unwrap();
    assert_eq!(code(&galdef(&["delta", r])), 0);
    assert_eq!(code(&galdef(&["delta", r, "--append", "q:2:1"])), 9);
    assert_eq!(code(&galdef(&["delta", r, "--append", "q:x:1"])), 2);
    let o = galdef(&["--format", "json", "delta", r, "--dual-selmer", "2", "--append", "a:1:1", "--append", "b:1:1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dual_selmer"], serde_json::json!([2, 1, 0]));
    let o = galdef(&["delta", r, "--dual-selmer", "0", "--append", "a:1:1"]);
    assert_ne!(code(&o), 0);

    std::fs::write(&rows, r#"{"rows": [{"label": "p", "tag": "AtP", "tangent_dim": 1, "h0_dim": 0}], "delta": 3}"#)
        .unwrap();
    assert_eq!(code(&galdef(&["delta", r])), 2);
    std::fs::write(&rows, r#"{"rows": [{"label": "p", "tag": "AtP", "tangent_dim": 0, "h0_dim": -1}]}"#).unwrap();
    assert_eq!(code(&galdef(&["delta", r])), 17);
}

#[test]
fn cohomology_values() {
    let h1 = |group: &str, p: &str, twist: &str| -> u64 {
        let o = galdef(&["--format", "json", "cohomology", "--group", group, "--p", p, "--twist", twist]);
        assert_eq!(code(&o), 0);
        serde_json::from_slice::<Value>(&o.stdout).unwrap()["h1"].as_u64().unwrap()
    };
    assert_eq!(h1("sl2", "3", "0"), 0);
    assert_eq!(h1("sl2", "5", "0"), 1);
    assert_eq!(h1("gl2", "5", "1"), 0);
    assert_eq!(h1("borel", "5", "2"), 1);
    assert_eq!(h1("borel", "5", "1"), 0);
}

#[test]
fn tame_ring_cases() {
    for (q, alpha, case) in [("11", "2", "I"), ("2", "1", "II"), ("19", "1", "III")] {
        let o = galdef(&["tame-ring", "--p", "5", "--n", "2", "--q", q, "--alpha", alpha, "--case-only"]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o).trim(), case);
    }
    let o = galdef(&["--format", "json", "tame-ring", "--p", "5", "--n", "2", "--q", "2", "--alpha", "1", "--enumerate"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["enumeration"]["comparison"]["bijective"], true);
    assert_eq!(code(&galdef(&["tame-ring", "--p", "5", "--n", "2", "--q", "5", "--alpha", "1"])), 14);
}

#[test]
fn closure_and_teichmuller() {
    let o = galdef(&["closure", "--p", "3", "--n", "2", "--gen", "1,1,6,7", "--gen", "1,6,4,7", "--gen", "1,1,0,1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("order 648, contains SL2: true"), "{}", stdout(&o));
    let o = galdef(&["closure", "--p", "3", "--n", "2", "--gen", "1,1,6,7", "--gen", "1,6,4,7"]);
    assert!(stdout(&o).contains("contains SL2: false"), "{}", stdout(&o));
    assert_eq!(code(&galdef(&["closure", "--p", "3", "--n", "2", "--gen", "1,1,6"])), 2);
    assert_eq!(code(&galdef(&["closure", "--p", "3", "--n", "2", "--gen", "3,0,0,3"])), 10);
    assert_eq!(code(&galdef(&["--cap", "10", "closure", "--p", "5", "--gen", "1,1,0,1", "--gen", "1,0,1,1"])), 11);

    let o = galdef(&["teichmuller", "--p", "5", "--n", "2", "--x", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("T([2]) = [7]"), "{}", stdout(&o));
    assert_eq!(code(&galdef(&["teichmuller", "--p", "4", "--n", "2", "--x", "2"])), 10);
}

#[test]
fn verify_suite_exit_codes() {
    for s in ["hpoly", "lemma25", "prop23", "euler"] {
        let o = galdef(&["verify", "--suite", s]);
        assert_eq!(code(&o), 0, "{s}: {}", stdout(&o));
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.txt");
    let o = galdef(&["-o", target.to_str().unwrap(), "check-hypotheses", &fixture("theorem_a_p5")]);
    assert_eq!(code(&o), 74);
}
