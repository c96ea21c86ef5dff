//! End-to-end tests driving the compiled binary: output shapes, exit
//! codes, JSON round-trips, budget knobs and determinism.

use std::process::Command;

use tuttekit::poly::BiPoly;
use tuttekit::{families, farey, graph, Limits};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tuttekit"))
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = bin().args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
        out.status.code().expect("no signal"),
    )
}

#[test]
fn tutte_text_forms() {
    let (stdout, _, code) = run(&["tutte", "--family", "farey", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "x^2 + x + y\n");

    let (stdout, _, code) = run(&["tutte", "--family", "koch", "--m", "1", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "(x^2 + x + y)^64\n");

    let (stdout, _, code) = run(&["tutte", "--family", "exp", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "(x^2 + x + y)^13\n");
}

#[test]
fn tutte_expansion_matches_library() {
    let (stdout, _, code) = run(&[
        "tutte", "--family", "koch", "--m", "1", "--n", "1", "--expand",
    ]);
    assert_eq!(code, 0);
    let want = families::koch_tutte(1, 1)
        .expand(&Limits::default())
        .unwrap();
    assert_eq!(stdout.trim_end(), want.to_string());
}

#[test]
fn tutte_json_round_trips() {
    let (stdout, _, code) = run(&["tutte", "--family", "farey", "--n", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let parsed = BiPoly::from_json(&v).unwrap();
    assert_eq!(parsed, farey::tutte(2, &Limits::default()).unwrap());

    let (stdout, _, code) = run(&[
        "tutte", "--family", "koch", "--m", "2", "--n", "4", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let parsed = families::PowerForm::from_json(&v).unwrap();
    assert_eq!(parsed.to_json(), families::koch_tutte(2, 4).to_json());
}

#[test]
fn budget_refusal_exits_two() {
    let (_, stderr, code) = run(&["tutte", "--family", "farey", "--n", "99"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exceeds cap"), "stderr: {stderr}");
}

#[test]
fn budget_refusal_as_json_object() {
    let (stdout, _, code) = run(&[
        "tutte", "--family", "farey", "--n", "99", "--format", "json",
    ]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("exceeds cap"));
    assert_eq!(v["exit"], 2);
}

#[test]
fn invariant_counts() {
    let cases: &[(&[&str], &str)] = &[
        (
            &[
                "invariant",
                "--family",
                "farey",
                "--n",
                "3",
                "--kind",
                "spanning-trees",
            ],
            "945",
        ),
        (
            &[
                "invariant",
                "--family",
                "farey",
                "--n",
                "3",
                "--kind",
                "cssg",
            ],
            "6144",
        ),
        (
            &[
                "invariant",
                "--family",
                "farey",
                "--n",
                "1",
                "--kind",
                "forests",
            ],
            "7",
        ),
        (
            &[
                "invariant",
                "--family",
                "koch",
                "--m",
                "1",
                "--n",
                "1",
                "--kind",
                "spanning-trees",
            ],
            "81",
        ),
        (
            &[
                "invariant",
                "--family",
                "exp",
                "--n",
                "1",
                "--kind",
                "forests",
            ],
            "2401",
        ),
        (
            &[
                "invariant",
                "--family",
                "farey",
                "--n",
                "2",
                "--kind",
                "eval",
                "--point",
                "1,2",
            ],
            "48",
        ),
        (
            &[
                "invariant",
                "--family",
                "farey",
                "--n",
                "2",
                "--kind",
                "eval",
                "--point",
                "3/2,-1",
            ],
            "219/16",
        ),
    ];
    for (args, want) in cases {
        let (stdout, stderr, code) = run(args);
        assert_eq!(code, 0, "{args:?}: {stderr}");
        assert_eq!(stdout.trim_end(), *want, "{args:?}");
    }
}

#[test]
fn invariant_polynomials_match_library() {
    let (stdout, _, code) = run(&[
        "invariant",
        "--family",
        "farey",
        "--n",
        "2",
        "--kind",
        "chromatic",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), farey::chromatic(2).to_string());

    let (stdout, _, code) = run(&[
        "invariant",
        "--family",
        "koch",
        "--m",
        "1",
        "--n",
        "1",
        "--kind",
        "reliability",
    ]);
    assert_eq!(code, 0);
    let want = families::triangle_power_reliability(&4.into(), &Limits::default()).unwrap();
    assert_eq!(stdout.trim_end(), want.to_string());
}

#[test]
fn count_form_rendering_follows_digit_budget() {
    // 3^1000 is about 1585 bits: printable normally, a power form when
    // the rendering budget is squeezed below that.
    let args = [
        "invariant",
        "--family",
        "exp",
        "--n",
        "6",
        "--kind",
        "spanning-trees",
    ];
    let (stdout, _, code) = run(&args);
    assert_eq!(code, 0);
    let digits = stdout.trim_end();
    assert!(digits.len() > 500 && digits.chars().all(|c| c.is_ascii_digit()));

    let out = bin()
        .args(args)
        .arg("--digit-render-bit-cap")
        .arg("100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), "3^1093");
}

#[test]
fn usage_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &[
            "invariant",
            "--family",
            "farey",
            "--n",
            "2",
            "--kind",
            "eval",
        ],
        &[
            "invariant",
            "--family",
            "farey",
            "--n",
            "2",
            "--kind",
            "eval",
            "--point",
            "nope",
        ],
        &[
            "invariant",
            "--family",
            "farey",
            "--n",
            "2",
            "--kind",
            "cssg",
            "--point",
            "1,1",
        ],
        &["tutte", "--family", "farey", "--n", "1", "--m", "3"],
        &["tutte", "--family", "koch", "--n", "1"],
        &["tutte", "--family", "farey"],
        &[
            "invariant",
            "--family",
            "farey",
            "--n",
            "2",
            "--kind",
            "nonsense",
        ],
    ];
    for args in cases {
        let (_, stderr, code) = run(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(!stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn graph_text_headers() {
    let (stdout, _, code) = run(&["graph", "--family", "farey", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next(), Some("5 7"));
    assert_eq!(stdout.lines().count(), 9, "header, 7 edges, marks line");

    let (stdout, _, _) = run(&["graph", "--family", "exp", "--n", "1"]);
    assert_eq!(stdout.lines().next(), Some("9 12"));

    let (stdout, _, _) = run(&["graph", "--family", "koch", "--m", "1", "--n", "0"]);
    assert_eq!(stdout.lines().next(), Some("3 3"));
}

#[test]
fn graph_json_round_trips() {
    let (stdout, _, code) = run(&["graph", "--family", "farey", "--n", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let parsed = graph::MarkedGraph::from_json(&v).unwrap();
    let direct = graph::farey_graph(2, &Limits::default()).unwrap();
    assert_eq!(parsed.to_json(), direct.to_json());
}

#[test]
fn out_flag_writes_the_file() {
    let path = std::env::temp_dir().join(format!("tuttekit-out-{}.txt", std::process::id()));
    let path_str = path.to_str().unwrap();
    let (stdout, _, code) = run(&["tutte", "--family", "farey", "--n", "1", "--out", path_str]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "x^2 + x + y\n");
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_all_passes() {
    let (stdout, _, code) = run(&["verify", "--scope", "all", "--max-n", "2"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"), "{stdout}");
    assert!(stdout.contains("checks passed"), "{stdout}");
}

#[test]
fn verify_guards_oracle_budgets() {
    let (_, stderr, code) = run(&["verify", "--scope", "farey", "--max-n", "9"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("edges"), "{stderr}");
}

#[test]
fn bench_prints_rows_and_median() {
    let (stdout, _, code) = run(&["bench", "--family", "farey", "--n", "2", "--reps", "3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.matches("rep ").count(), 3, "{stdout}");
    let median = stdout.lines().last().unwrap();
    assert!(
        median.starts_with("median:") && median.contains("speedup"),
        "{stdout}"
    );
}

#[test]
fn bench_skips_infeasible_oracle() {
    let (stdout, _, code) = run(&["bench", "--family", "farey", "--n", "5", "--reps", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("oracle skipped"), "{stdout}");
    assert!(stdout.contains("subset budget"), "{stdout}");
}

#[test]
fn output_is_deterministic() {
    let first = run(&["tutte", "--family", "farey", "--n", "4", "--format", "json"]);
    let second = run(&["tutte", "--family", "farey", "--n", "4", "--format", "json"]);
    assert_eq!(first, second);
}

#[test]
fn env_variables_set_caps_and_flags_override_them() {
    let out = bin()
        .env("TUTTEKIT_POLY_GENERATION_CAP", "2")
        .args(["tutte", "--family", "farey", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .env("TUTTEKIT_POLY_GENERATION_CAP", "2")
        .args([
            "tutte",
            "--family",
            "farey",
            "--n",
            "3",
            "--poly-generation-cap",
            "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn help_exits_zero() {
    let (stdout, _, code) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("tutte"));
}
