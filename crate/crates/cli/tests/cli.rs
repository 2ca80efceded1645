//! End-to-end tests of the binary: exit codes, report shapes, file round
//! trips, and byte stability of emitted artifacts.

use std::path::Path;
use std::process::{Command, Output};

fn algoglue(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algoglue"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

const GCD_LABELLING: &str = r#"{ "targets": "programs",
  "map": { "y_is_0": "gcd_y_is_0", "ret": "gcd_ret",
           "y_nonzero": "gcd_y_nonzero", "rem": "gcd_rem" } }
"#;

#[test]
fn run_maps_outcomes_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = algoglue(&["run", "--program", "tm_not", "--input", "^0"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("terminated in 2 steps"), "{text}");
    assert!(text.contains("final:   1"), "{text}");

    let out = algoglue(
        &["run", "--program", "tm_succ_unary", "--input", "^1", "--budget", "0"],
        dir.path(),
    );
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("budget 0"));

    let out = algoglue(&["run", "--program", "no_such", "--input", "^0"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown program `no_such`"));
}

#[test]
fn glue_emits_a_program_that_runs_and_checks_back() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("phi.json"), GCD_LABELLING).unwrap();

    let out = algoglue(
        &["glue", "--algorithm", "gcd_free", "--labelling", "phi.json", "--out", "gcd.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = algoglue(
        &["run", "--program", "gcd.json", "--input", "{x: 270, y: 192}"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("{x: 6, y: 0}"), "{}", stdout(&out));

    let out = algoglue(
        &[
            "check-implements",
            "--program",
            "gcd.json",
            "--algorithm",
            "gcd_free",
            "--labelling",
            "phi.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("implements: yes"));

    // A same-model program of the wrong shape is a clean "no", exit 2.
    let out = algoglue(
        &[
            "check-implements",
            "--program",
            "gcd_rem",
            "--algorithm",
            "gcd_free",
            "--labelling",
            "phi.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stdout(&out).contains("implements: no"));
}

#[test]
fn succinct_find_witness_file_passes_check_implements() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("phi.json"), GCD_LABELLING).unwrap();
    algoglue(
        &["glue", "--algorithm", "gcd_free", "--labelling", "phi.json", "--out", "gcd.json"],
        dir.path(),
    );

    let out = algoglue(
        &[
            "succinct-find",
            "--program",
            "gcd.json",
            "--library",
            "phi.json",
            "--f",
            "n-1",
            "--out",
            "witness.json",
            "--budget",
            "2000000",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("search : complete"));

    // The emitted witness re-parses into an algorithm the checker accepts.
    let out = algoglue(
        &[
            "check-implements",
            "--program",
            "gcd.json",
            "--algorithm",
            "witness.json",
            "--labelling",
            "phi.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn census_csv_is_byte_stable_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = algoglue(&["census", "--n", "5", "--f", "n/2", "--out", name], dir.path());
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with(b"n,programs_enumerated,succinct_count,fraction\n"));
}

#[test]
fn verify_impl_reports_honest_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let good = r#"{ "interpretation": "bool_cells", "structure": "booleans",
  "programs": { "not": "tm_not", "and": "tm_and" } }"#;
    std::fs::write(dir.path().join("good.json"), good).unwrap();
    let out = algoglue(
        &["verify-impl", "--manifest", "good.json", "--samples", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("0 disagree"));

    // Binding `not` to the conjunction program must fail loudly.
    let bad = r#"{ "interpretation": "bool_cells", "structure": "booleans",
  "programs": { "not": "tm_and" } }"#;
    std::fs::write(dir.path().join("bad.json"), bad).unwrap();
    let out = algoglue(
        &["verify-impl", "--manifest", "bad.json", "--samples", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stdout(&out).contains("disagree"));
}

#[test]
fn instantiate_emits_a_loadable_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let out = algoglue(
        &[
            "instantiate",
            "--algorithm",
            "euclidean_gcd",
            "--structure",
            "naturals",
            "--samples",
            "100",
            "--out",
            "gcd_nat.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = algoglue(&["dot", "--algorithm", "gcd_nat.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("digraph"));
}

#[test]
fn check_model_json_is_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let out = algoglue(
        &["check-model", "--theory", "euclidean", "--structure", "naturals", "--json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["structure"], "naturals");
    assert!(parsed["sentences"].as_array().unwrap().len() >= 9);
}

#[test]
fn dot_marks_initial_and_terminal_states() {
    let dir = tempfile::tempdir().unwrap();
    let out = algoglue(&["dot", "--algorithm", "gcd_A"], dir.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("\"__start\" -> \"begin\""));
    assert!(text.contains("\"end\" [shape=doublecircle]"));
    assert_eq!(text.matches(" -> ").count(), 5, "one entry arrow plus four edges");
}

#[test]
fn eval_computes_and_respects_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out = algoglue(
        &["eval", "--term", "(primrec (proj 1 1) (comp succ (proj 2 3)))", "--args", "3,4"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("= 7"));

    let out = algoglue(
        &["eval", "--term", "(mu (comp succ (proj 1 1)))", "--budget", "40"],
        dir.path(),
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn unfolded_mergesort_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = algoglue(
        &["unfold", "--algorithm", "mergesort", "--label", "sort", "--depth", "1", "--out", "u1.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // Re-unfolding the emitted file exercises the semantic loader, including
    // the composite meanings and the `bottom` map.
    let out = algoglue(
        &["unfold", "--algorithm", "u1.json", "--label", "bottom", "--depth", "0", "--out", "u1b.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}
