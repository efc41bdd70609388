use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn ltlguard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltlguard"))
        .args(args)
        .env_remove("LTLGUARD_API_KEY")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn parse_prints_canonical_form() {
    let o = ltlguard(&["parse", "G(a->F b)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "G(a -> F b)\n");
}

#[test]
fn check_syntax_reports_positions() {
    let o = ltlguard(&["check-syntax", "a U U b"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("missing-operand at position 4"));
    assert_eq!(
        ltlguard(&["check-syntax", "G(a -> F b)"]).status.code(),
        Some(0)
    );
    let o = ltlguard(&["check-syntax", "-f", &fixture("running_example_final.ltl")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(ltlguard(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ltlguard(&["parse"]).status.code(), Some(2));
    assert_eq!(
        ltlguard(&["include", "/nonexistent.ltl", &fixture("base_rule.rules")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn translate_text_and_dot() {
    let o = ltlguard(&["translate", "F a"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("aps: a\n"));
    let o = ltlguard(&["translate", "--format", "dot", "F a"]);
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn include_verdicts() {
    let dir = scratch("include");
    let phi = dir.join("phi.ltl");
    let rules = dir.join("x.rules");
    fs::write(&phi, "G a\n").unwrap();
    fs::write(&rules, "x | 1 | F a\n").unwrap();
    let o = ltlguard(&["include", phi.to_str().unwrap(), rules.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Included.\n");

    let o = ltlguard(&[
        "include",
        &fixture("running_example_task.ltl"),
        &fixture("base_rule.rules"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("Counterexample: "), "{out}");
    assert!(out.ends_with("Not included.\n"));
}

#[test]
fn include_report_and_dot_dir() {
    let dir = scratch("dots");
    let o = ltlguard(&[
        "include",
        "--report",
        "--dot-dir",
        dir.to_str().unwrap(),
        &fixture("running_example_task.ltl"),
        &fixture("base_rule.rules"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("Aut A: of Trans. "));
    assert!(out.contains("Time used(ms): "));
    let mut files: Vec<String> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    files.sort();
    assert_eq!(files, ["phi.dot", "product-base.dot", "rule-base.dot"]);
}

#[test]
fn path_finds_a_divergence() {
    let o = ltlguard(&[
        "path",
        &fixture("running_example_task.ltl"),
        &fixture("base_rule.rules"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("base: "));
}

#[test]
fn run_reports_non_output() {
    let o = ltlguard(&[
        "run",
        &fixture("running_example.dataset"),
        &fixture("base_rule.rules"),
        "--transcript",
        &fixture("running_example.transcript"),
        "--max-iters",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("running-example  non-output             1"));
}

#[test]
fn batch_usage_errors() {
    let d = fixture("running_example.dataset");
    let r = fixture("base_rule.rules");
    assert_eq!(ltlguard(&["run", &d, &r]).status.code(), Some(2));
    assert_eq!(
        ltlguard(&["run", &d, &r, "--backend", "scripted"])
            .status
            .code(),
        Some(2)
    );
    let t = fixture("running_example.transcript");
    assert_eq!(
        ltlguard(&["run", &d, &r, "--transcript", &t, "--max-iters", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_writes_identical_results() {
    let dir = scratch("bench");
    let run_once = |name: &str| {
        let out = dir.join(name);
        let o = ltlguard(&[
            "bench",
            &fixture("table9.dataset"),
            &fixture("base_rule.rules"),
            "--transcript",
            &fixture("all_pass.transcript"),
            "--parallel",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("violation rate: 0.0%"));
        fs::read(out).unwrap()
    };
    let a = run_once("a.json");
    let b = run_once("b.json");
    assert_eq!(a, b);
    assert!(String::from_utf8(a)
        .unwrap()
        .contains("\"violation_rate\": 0.0"));
}

#[test]
fn survey_counts_initial_compliance() {
    let dir = scratch("survey");
    let out = dir.join("s.json");
    let o = ltlguard(&[
        "survey",
        &fixture("table9.dataset"),
        &fixture("base_rule.rules"),
        "--transcript",
        &fixture("all_pass.transcript"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("outputs: 1/3"));
    assert!(out.exists());
}
