use std::path::PathBuf;
use std::process::Command;

use fincat_cli::workspace::Workspace;
use serde_json::Value;

mod common;
use common::CASES;

fn corpus() -> PathBuf {
    common::corpus()
}

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fincat(args: &[&str]) -> Out {
    let out = Command::new(env!("CARGO_BIN_EXE_fincat"))
        .args(args)
        .current_dir(corpus())
        .output()
        .expect("binary runs");
    Out {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = fincat(&full);
    (out.code, serde_json::from_str(&out.stdout).expect("valid json"))
}

#[test]
fn exit_code_contract_holds_across_the_corpus() {
    for (args, code) in CASES {
        let out = fincat(args);
        assert_eq!(
            out.code, *code,
            "{args:?}\nstdout: {}\nstderr: {}",
            out.stdout, out.stderr
        );
        let (jcode, doc) = json(args);
        assert_eq!(jcode, *code, "{args:?} with --json");
        assert_eq!(doc["exit_code"], *code);
        assert_eq!(doc["schema"], "fincat-report/1");
    }
}

#[test]
fn corpus_has_a_dozen_files_and_covers_every_subcommand() {
    let files: Vec<_> = std::fs::read_dir(corpus())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "cat"))
        .collect();
    assert!(files.len() >= 12, "{} files", files.len());
    let subcommands = [
        "validate",
        "limit",
        "colimit",
        "end",
        "coend",
        "kan-left",
        "kan-right",
        "adjoint-of",
        "snake",
        "yoneda-check",
        "density",
        "codensity",
        "weighted-limit",
        "diagram-eval",
        "diagram-normalize",
    ];
    for s in subcommands {
        assert!(CASES.iter().any(|(a, _)| a.contains(&s)), "{s} not exercised");
    }
    // render is covered by its own test, which writes into a temporary directory.
}

#[test]
fn json_output_is_byte_stable_under_a_fixed_seed() {
    for (args, _) in CASES {
        let mut full = vec!["--json", "--seed", "17"];
        full.extend_from_slice(args);
        let a = fincat(&full).stdout;
        let b = fincat(&full).stdout;
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn yoneda_check_depends_only_on_the_seed() {
    let a = fincat(&["--json", "--seed", "5", "-f", "yoneda.cat", "yoneda-check", "par"]).stdout;
    let b = fincat(&["--json", "--seed", "5", "-f", "yoneda.cat", "yoneda-check", "par"]).stdout;
    let c = fincat(&["--json", "--seed", "6", "-f", "yoneda.cat", "yoneda-check", "par"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn kan_left_reports_sizes_two_and_two() {
    let (code, doc) = json(&["-f", "kan.cat", "kan-left", "K", "F"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["sizes"], serde_json::json!([2, 2]));
    let table = doc["result"]["extension"]["maps"]["a"].as_object().unwrap();
    let targets: std::collections::BTreeSet<_> = table.values().filter_map(Value::as_str).collect();
    assert_eq!(table.len(), 2);
    assert_eq!(targets.len(), 2, "L(a) is a bijection");
}

#[test]
fn bad_counit_names_the_failing_component() {
    let (code, doc) = json(&["-f", "snake.cat", "snake", "I", "I", "eta", "epsBad"]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "violation");
    let cx = &doc["report"]["counterexample"];
    assert!(cx["law"].as_str().unwrap().starts_with("snake-"));
    assert!(cx["detail"].as_str().unwrap().contains('*'));
}

#[test]
fn incomplete_table_names_the_missing_pair() {
    let out = fincat(&["validate", "incomplete.cat"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("incomplete composition table"));
    assert!(out.stderr.contains("b.a"));
}

#[test]
fn syntax_errors_carry_file_line_and_column() {
    let out = fincat(&["validate", "syntax.cat"]);
    assert!(out.stderr.starts_with("syntax.cat:3:9:"), "{}", out.stderr);
}

#[test]
fn load_time_violation_embeds_the_report() {
    let (code, doc) = json(&["validate", "broken_nat.cat"]);
    assert_eq!(code, 1);
    assert_eq!(doc["report"]["counterexample"]["law"], "naturality");
}

#[test]
fn absent_results_exit_one_without_an_error() {
    let (code, doc) = json(&["-f", "equalizer.cat", "limit", "D"]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "absent");
    assert!(doc["result"]["object"].is_null());
    assert!(doc["error"].is_null());
}

#[test]
fn finset_limits_of_the_parallel_pair() {
    let (_, lim) = json(&["-f", "equalizer.cat", "limit", "X"]);
    let (_, colim) = json(&["-f", "equalizer.cat", "colimit", "X"]);
    assert_eq!(lim["result"]["object"]["size"], 2);
    assert_eq!(colim["result"]["object"]["size"], 1);
}

#[test]
fn end_and_coend_of_the_hom_bifunctor() {
    let (_, end) = json(&["-f", "end.cat", "end", "H"]);
    let (_, coend) = json(&["-f", "end.cat", "coend", "H"]);
    assert_eq!(end["result"]["object"]["size"], 1);
    assert_eq!(coend["result"]["object"]["size"], 2);
}

#[test]
fn adjoints_of_the_collapse_functor() {
    let (_, right) = json(&["-f", "adjoint.cat", "adjoint-of", "bang", "--side", "right"]);
    let (_, left) = json(&["-f", "adjoint.cat", "adjoint-of", "bang", "--side", "left"]);
    assert_eq!(right["result"]["adjoint"]["objects"]["*"], "1");
    assert_eq!(left["result"]["adjoint"]["objects"]["*"], "0");
}

#[test]
fn render_writes_the_same_svg_twice() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for p in [&a, &b] {
        let out = fincat(&["-f", "diagrams.cat", "render", "whisker", "-o", p.to_str().unwrap()]);
        assert_eq!(out.code, 0, "{}", out.stderr);
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
}

#[test]
fn without_files_the_current_directory_is_loaded() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(corpus().join("kan.cat"), dir.path().join("kan.cat")).unwrap();
    let run = fincat_cli::run_args(["fincat", "kan-left", "K", "F"], dir.path());
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("0: 2, 1: 2"));
}

#[test]
fn serialized_workspaces_reparse_to_equal_workspaces() {
    for file in [
        "two.cat",
        "kan.cat",
        "equalizer.cat",
        "meet.cat",
        "adjoint.cat",
        "snake.cat",
        "end.cat",
        "yoneda.cat",
        "density.cat",
        "weighted.cat",
        "diagrams.cat",
    ] {
        let ws = Workspace::load_files(&[corpus().join(file)]).unwrap();
        let text = ws.serialize();
        let again = Workspace::parse(&text).unwrap_or_else(|e| panic!("{file}: {e}\n{text}"));
        assert_eq!(again.serialize(), text, "{file}");
        assert_eq!(ws.declarations(), again.declarations());
        for (kind, name) in ws.declarations() {
            match kind {
                "category" => assert_eq!(ws.category(name), again.category(name)),
                "functor" => assert_eq!(ws.functor(name), again.functor(name)),
                "nat" => assert_eq!(ws.nat(name), again.nat(name)),
                "setfunctor" => assert_eq!(ws.setfunctor(name), again.setfunctor(name)),
                _ => assert_eq!(ws.terms[name], again.terms[name]),
            }
        }
    }
}
