use std::fs;
use std::process::Command;

use rainbowlab::cli::read_table;
use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rainbowlab"));
    c.env_remove("RAINBOWLAB_MAX_ORDER");
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json_of(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn mvalue_both() {
    let (code, out, _) = run(&["mvalue", "15", "--both"]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["n"], 15);
    assert_eq!(v["formula"], 2);
    assert_eq!(v["search"], 2);
    assert_eq!(v["agree"], true);
    // --both is the default.
    assert_eq!(run(&["mvalue", "15"]).1, out);
}

#[test]
fn classify_17() {
    let (code, out, _) = run(&["classify", "17"]);
    assert_eq!(code, 0);
    assert_eq!(json_of(&out), json!({"p": 17, "ord2": 8, "class": "P1"}));
}

#[test]
fn scan_rainbow_files() {
    let dir = tempfile::tempdir().unwrap();
    let z3 = dir.path().join("z3.txt");
    fs::write(&z3, "group: 3\nABC\n").unwrap();
    let (code, out, _) = run(&["scan-rainbow", z3.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "rainbow 0,2,1\n"));

    let z9 = dir.path().join("z9.txt");
    fs::write(&z9, "group: 9\nACCBCCBCC\n").unwrap();
    assert_eq!(
        run(&["scan-rainbow", z9.to_str().unwrap()]).1,
        "rainbow-free\n"
    );

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "group: 3\nABCA\n").unwrap();
    let (code, out, err) = run(&["scan-rainbow", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty() && err.contains("bad coloring file"));

    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["scan-rainbow", missing.to_str().unwrap()]).0, 2);
}

#[test]
fn gen_output_scans_clean() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["gen", "prime", "31"][..],
        &["gen", "extremal", "3,3"],
        &["gen", "counterexample", "5"],
    ] {
        let (code, out, _) = run(args);
        assert_eq!(code, 0, "{args:?}");
        let f = dir.path().join("c.txt");
        fs::write(&f, &out).unwrap();
        assert_eq!(
            run(&["scan-rainbow", f.to_str().unwrap()]).1,
            "rainbow-free\n",
            "{args:?}"
        );
    }
}

#[test]
fn verify_commands() {
    let (code, out, _) = run(&["verify-main", "--group", "9"]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["rainbow_free_count"], 54);
    assert_eq!(v["witnesses_found"], 54);
    assert_eq!(v["colorings_checked"], 19683);
    assert_eq!(v["failures"], json!([]));

    let (code, out, _) = run(&["verify-even", "--group", "6", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out
        .lines()
        .any(|l| l.starts_with("rainbow_free_count") && l.ends_with(" 18")));

    let (code, _, err) = run(&["verify-main", "--group", "21"]);
    assert_eq!(code, 2);
    assert!(err.contains("--max-order"));
    let (code, _, _) = run(&["verify-main", "--group", "21", "--max-order", "17"]);
    assert_eq!(code, 2);

    let (code, out, _) = run(&[
        "verify-sumsets",
        "--seed",
        "5",
        "--pairs",
        "300",
        "--max-order",
        "30",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["pairs"], 300);
}

#[test]
fn env_cap_and_flag_override() {
    let out = bin()
        .args(["verify-main", "--group", "15"])
        .env("RAINBOWLAB_MAX_ORDER", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["verify-main", "--group", "15", "--max-order", "15"])
        .env("RAINBOWLAB_MAX_ORDER", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(["classify", "17"])
        .env("RAINBOWLAB_MAX_ORDER", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_round_trip_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["table", "--odd-max", "9", "--even-max", "8", "--out", p]);
    assert_eq!(code, 0);
    let rows = read_table(&path).unwrap();
    assert_eq!(serde_json::to_value(&rows).unwrap(), json_of(&out));
    let ns: Vec<u64> = rows.iter().map(|r| r.n).collect();
    assert_eq!(ns, vec![2, 3, 4, 5, 6, 7, 8, 9]);
    assert!(rows.iter().all(|r| r.agree == Some(true)));
    let r8 = rows.iter().find(|r| r.n == 8).unwrap();
    assert_eq!((r8.formula, r8.search), (None, Some(0)));

    // Present rows are kept as they are, even if edited.
    let mut edited = rows.clone();
    edited[0].search = Some(0);
    edited.retain(|r| r.n != 9);
    fs::write(&path, serde_json::to_string(&edited).unwrap()).unwrap();
    let (_, out, _) = run(&["table", "--odd-max", "11", "--even-max", "8", "--out", p]);
    let resumed = read_table(&path).unwrap();
    assert_eq!(serde_json::to_value(&resumed).unwrap(), json_of(&out));
    assert_eq!(resumed.len(), 9);
    assert_eq!(
        resumed.iter().find(|r| r.n == 9),
        rows.iter().find(|r| r.n == 9)
    );

    fs::write(&path, "not json").unwrap();
    assert_eq!(run(&["table", "--out", p]).0, 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &[
            "verify-sumsets",
            "--seed",
            "11",
            "--pairs",
            "500",
            "--max-order",
            "40",
        ][..],
        &["--workers", "1", "verify-main", "--group", "3,3"],
        &["--workers", "4", "verify-main", "--group", "3,3"],
        &["--format", "csv", "mvalue", "12"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a, b, "{args:?}");
    }
    assert_eq!(
        run(&["--workers", "1", "verify-main", "--group", "3,3"]),
        run(&["--workers", "3", "verify-main", "--group", "3,3"])
    );
}

#[test]
fn usage_errors() {
    for args in [
        &[][..],
        &["classify"],
        &["classify", "9"],
        &["gen", "prime", "13"],
        &["verify-even", "--group", "3,2,2"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty() && !err.is_empty(), "{args:?}");
    }
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-sumsets"));
}
