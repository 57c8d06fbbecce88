use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lagroc_core::ProblemFile;

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn lagroc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagroc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn to_lagrangian_on_e1() {
    let out = lagroc(&["to-lagrangian", s(&example("e1.json"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "U\\Y  y0  y1\nu0   2   1\nu1   0   0\n");
}

#[test]
fn to_rockafellian_on_e1_lagrangian() {
    let out = lagroc(&["--format", "csv", "to-rockafellian", s(&example("e1_lagrangian.json"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "U\\X,x0,x1\nu0,2,3\nu1,0,2\n");
}

#[test]
fn lagrangian_output_round_trips_through_rockafellian() {
    let dir = tempfile::tempdir().unwrap();
    let lpath = dir.path().join("l.json");
    let out = lagroc(&["to-lagrangian", s(&example("e1.json")), "--output", s(&lpath)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let lfile = ProblemFile::load(&lpath).unwrap();
    assert!(lfile.lagrangian.is_some());
    assert!(lfile.rockafellian.is_none());

    let out = lagroc(&["--format", "csv", "to-rockafellian", s(&lpath)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "U\\X,x0,x1\nu0,2,3\nu1,0,2\n");
}

#[test]
fn conjugate_of_inline_function() {
    let out = lagroc(&[
        "--format",
        "csv",
        "conjugate",
        s(&example("e1.json")),
        "--function",
        "5,3",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "Y,value\ny0,-2\ny1,-1\n");

    let out = lagroc(&[
        "--format",
        "csv",
        "conjugate",
        s(&example("e1.json")),
        "--function",
        "inf,inf",
    ]);
    assert_eq!(stdout(&out), "Y,value\ny0,-inf\ny1,-inf\n");

    let out = lagroc(&[
        "--format",
        "csv",
        "conjugate",
        s(&example("e1.json")),
        "--which",
        "dual",
        "--function",
        "y1=3,y0=5",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "X,value\nx0,-3\nx1,-1\n");
}

#[test]
fn all_neg_inf_lagrangian_gives_all_neg_inf_rockafellian() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "l.json",
        r#"{"sets": {"U": ["u0"], "X": ["x0", "x1"], "Y": ["y0", "y1"]},
            "coupling": [[0.0, 0.0], [1.0, 2.0]],
            "lagrangian": [["-inf", "-inf"]]}"#,
    );
    let out = lagroc(&["--format", "csv", "to-rockafellian", s(&p)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "U\\X,x0,x1\nu0,-inf,-inf\n");
}

#[test]
fn check_couple_verdicts() {
    let out = lagroc(&["check-couple", s(&example("e1_couple.json"))]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("verdict: couple"));

    // E1's R is not c-convex row-wise, so it is not the partner of its own Lagrangian.
    let out = lagroc(&[
        "check-couple",
        s(&example("e1.json")),
        s(&example("e1_lagrangian.json")),
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("verdict: not a couple"));
    assert!(text.contains("witnesses:"));
    assert!(!text.contains("ALARM"));
}

#[test]
fn weak_duality_reports() {
    let out = lagroc(&["--format", "csv", "weak-duality", s(&example("e1.json"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "field,value\nbase_point,x0\nprimal_value,0\ndual_value,0\ntight,true\ngap,0\n"
    );
    let out = lagroc(&[
        "--format",
        "csv",
        "weak-duality",
        s(&example("e1.json")),
        "--base-point",
        "x1",
    ]);
    assert_eq!(
        stdout(&out),
        "field,value\nbase_point,x1\nprimal_value,3\ndual_value,2\ntight,false\ngap,1\n"
    );
    let out = lagroc(&["--format", "structured", "weak-duality", s(&example("spike.json"))]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["primal_value"], 10.0);
    assert_eq!(v["dual_value"], 0.0);
    assert_eq!(v["gap"], 10.0);
}

#[test]
fn exit_code_unknown_base_point_is_3() {
    let out = lagroc(&["weak-duality", s(&example("e1.json")), "--base-point", "x9"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("x9"));
}

#[test]
fn exit_code_missing_table_is_4() {
    let out = lagroc(&["to-lagrangian", s(&example("e1_lagrangian.json"))]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    let out = lagroc(&["to-rockafellian", s(&example("e1.json"))]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    let out = lagroc(&["check-couple", s(&example("e1.json"))]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn exit_code_mismatched_domains_is_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "l.json",
        r#"{"sets": {"U": ["u0", "u1"], "X": ["x0", "x1"], "Y": ["y0", "z1"]},
            "coupling": [[0.0, 0.0], [1.0, 2.0]],
            "lagrangian": [[2.0, 1.0], [0.0, 0.0]]}"#,
    );
    let out = lagroc(&["check-couple", s(&example("e1.json")), s(&p)]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));

    let out = lagroc(&["conjugate", s(&example("e1.json")), "--function", "1,2,3"]);
    assert_eq!(code(&out), 3);
    let out = lagroc(&["conjugate", s(&example("e1.json")), "--function", "x0=1,x7=2"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn exit_code_malformed_entry_is_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "bad.json",
        "{\n  \"sets\": {\"U\": [\"u\"], \"X\": [\"x\"], \"Y\": [\"y\"]},\n  \"coupling\": [[\"Inf\"]]\n}\n",
    );
    let out = lagroc(&["to-lagrangian", s(&p)]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("Inf") && err.contains("line 3 column"), "{err}");

    let out = lagroc(&["conjugate", s(&example("e1.json")), "--function", "5, Inf"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("column 4"), "{}", stderr(&out));

    let p = write(
        dir.path(),
        "ragged.json",
        r#"{"sets": {"U": ["u"], "X": ["x"], "Y": ["y"]}, "coupling": [[1, 2]]}"#,
    );
    let out = lagroc(&["to-lagrangian", s(&p)]);
    assert_eq!(code(&out), 2);
    let p = write(
        dir.path(),
        "dup.json",
        r#"{"sets": {"U": ["u"], "X": ["x", "x"], "Y": ["y"]}, "coupling": [[1], [2]]}"#,
    );
    let out = lagroc(&["to-lagrangian", s(&p)]);
    assert_eq!(code(&out), 2);
    let out = lagroc(&["to-lagrangian", s(&dir.path().join("absent.json"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn exit_code_bad_arguments_is_2() {
    assert_eq!(code(&lagroc(&["fuzz", "--count", "0"])), 2);
    assert_eq!(code(&lagroc(&["fuzz", "--max-set-size", "0"])), 2);
    assert_eq!(code(&lagroc(&["fuzz", "--grid", "5..1"])), 2);
    assert_eq!(code(&lagroc(&["--tol", "abc", "fuzz"])), 2);
    assert_eq!(code(&lagroc(&["frobnicate"])), 2);
}

#[test]
fn fuzz_is_deterministic() {
    let a = lagroc(&["fuzz", "--count", "100", "--seed", "7"]);
    let b = lagroc(&["fuzz", "--count", "100", "--seed", "7"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("result: PASS"));
    let c = lagroc(&["fuzz", "--count", "100", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn fuzz_injected_fault_writes_reproduction() {
    let dir = tempfile::tempdir().unwrap();
    let repro = dir.path().join("repro.json");
    let out = lagroc(&[
        "fuzz",
        "--count",
        "50",
        "--inject-fault",
        "sign-flip",
        "--output",
        s(&repro),
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("result: FAIL"), "{text}");
    assert!(text.contains("seed 42"));
    let file = ProblemFile::load(&repro).unwrap();
    assert!(file.rockafellian.is_some() && file.lagrangian.is_some());
    // The reproduction is itself a valid problem the other subcommands accept.
    assert_eq!(code(&lagroc(&["to-lagrangian", s(&repro)])), 0);
}
