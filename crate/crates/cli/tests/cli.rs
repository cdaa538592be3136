use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use kleene_core::format::parse_automaton;
use kleene_core::{compile, parse_expr, Alphabet, SemiringId};
use serde_json::Value;

fn kleene(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleene")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

const AB_STAR: &str = r#"{"semiring":"boolean","alphabet":["a","b"],"dim":2,"alpha":[1,0],"beta":[1,0],
  "M":{"a":[[0,1],[0,0]],"b":[[0,0],[1,0]]}}"#;

#[test]
fn eval_prints_geometric_coefficients() {
    let o = kleene(&["eval", "--semiring", "nat-inf", "--alphabet", "a", "--len", "3", "(2@a)*"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().take(4).map(str::to_owned).collect();
    let expected: Vec<String> =
        (0..4).map(|k| format!("{}: {}", if k == 0 { "eps".into() } else { "a".repeat(k) }, 1u64 << k)).collect();
    assert_eq!(lines, expected);
    assert!(stdout(&o).contains("eval and compile agree"));
}

#[test]
fn eval_of_a_single_word() {
    let o = kleene(&["eval", "--alphabet", "a,b", "--len", "2", "a.b"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for line in out.lines().filter(|l| !l.starts_with('#')) {
        let expect = if line.starts_with("ab:") { "ab: 1" } else { "" };
        if expect.is_empty() {
            assert!(line.ends_with(": 0"), "{line}");
        } else {
            assert_eq!(line, expect);
        }
    }
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 7);
}

#[test]
fn star_of_zero_is_one() {
    let o = kleene(&["eval", "--nonzero", "0*"]);
    assert_eq!(stdout(&o).lines().next(), Some("eps: 1"));
}

#[test]
fn equivalence_verdicts() {
    let o = kleene(&["equiv", "(a+b)*", "((a*).b)*.(a*)", "--len", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("EQUIV up to 5"));
    let o = kleene(&["equiv", "a", "a.a"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("DIFFER at a"));
    assert_eq!(code(&kleene(&["equiv", "e", "0*"])), 0);
}

#[test]
fn finite_carriers_catch_differences_beyond_the_bound() {
    let o = kleene(&["equiv", "a*", "a* + a.a.a.a.a.b", "--len", "3"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("EQUIV up to 3"));
    assert!(out.contains("exact: differ at aaaaab"));
    // over nat-inf only the truncated comparison is made
    let o = kleene(&["equiv", "--semiring", "nat-inf", "a*", "a* + a.a.a.a.a.b", "--len", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn error_exit_codes() {
    assert_eq!(code(&kleene(&["eval", "a.+b"])), 2);
    assert_eq!(code(&kleene(&["eval", "(a"])), 2);
    assert_eq!(code(&kleene(&["eval", "c"])), 3);
    assert_eq!(code(&kleene(&["eval", "--semiring", "boolean", "7@a"])), 3);
    assert_eq!(code(&kleene(&["eval", "--semiring", "mystery", "a"])), 2);
    assert_eq!(code(&kleene(&["omega", "e + a"])), 3);
    assert_eq!(code(&kleene(&["omega", "--semiring", "nat-inf", "a"])), 3);
}

#[test]
fn compiled_automata_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    for (semiring, expr) in [("boolean", "(a.b)* + b"), ("nat-inf", "3@(a + inf@b)*"), ("chain(3)", "2@a.b*")] {
        let o = kleene(&["compile", "--semiring", semiring, expr, "-o", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        let id: SemiringId = semiring.parse().unwrap();
        let ab = Alphabet::new(&["a", "b"]).unwrap();
        let direct = compile(&parse_expr(expr, id, &ab).unwrap(), id, ab.into()).unwrap();
        assert_eq!(parse_automaton(&fs::read_to_string(&path).unwrap()).unwrap(), direct);
        let o = kleene(&["compile", "--semiring", semiring, expr]);
        assert_eq!(parse_automaton(&stdout(&o)).unwrap(), direct);
    }
}

#[test]
fn decompose_ab_star() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ab.json", AB_STAR);
    let o = kleene(&["decompose", &f]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("level sets: 1"));
    assert!(out.contains("value 1: accepting states {0}"));
    assert!(out.contains("words up to 4: eps ab abab\n"));
    let j: Value = serde_json::from_slice(&kleene(&["decompose", &f, "--json"]).stdout).unwrap();
    assert_eq!(j["classes"].as_array().unwrap().len(), 1);
    assert_eq!(j["classes"][0]["value"], 1);
}

#[test]
fn omega_of_e_plus_a() {
    let o = kleene(&["omega", "--semiring", "nat-inf", "--alphabet", "a", "--len", "3", "e + a"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("eps: 1\na: inf\naa: inf\naaa: inf\n"));
    // iterates of e + a grow linearly: a lower bound is crossed, the default is not
    let strict = kleene(&["omega", "--semiring", "nat-inf", "--alphabet", "a", "--len", "3", "e + a", "--strict"]);
    assert_eq!(code(&strict), 1);
    let low =
        ["omega", "--semiring", "nat-inf", "--alphabet", "a", "--len", "3", "e + a", "--strict", "--omega-bound", "14"];
    assert_eq!(code(&kleene(&low)), 0);
}

#[test]
fn simulation_commands() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write(dir.path(), "ab.json", AB_STAR);
    let id = write(dir.path(), "id.json", "[[1,0],[0,1]]");
    let swap = write(dir.path(), "swap.json", "[[0,1],[1,0]]");
    assert_eq!(code(&kleene(&["simcheck", &ab, &ab, &id])), 0);
    let o = kleene(&["simcheck", &ab, &ab, &swap]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("NOT A SIMULATION"));
    let o = kleene(&["simsearch", &ab, &ab, "--json"]);
    assert_eq!(code(&o), 0);
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["count"], 1);
    assert_eq!(j["witnesses"][0], serde_json::json!([[1, 0], [0, 1]]));
    let n = dir.path().join("n.json");
    kleene(&["compile", "--semiring", "nat-inf", "a", "-o", n.to_str().unwrap()]);
    assert_eq!(code(&kleene(&["simsearch", n.to_str().unwrap(), n.to_str().unwrap()])), 3);
    let bad = write(dir.path(), "bad.json", "{\"semiring\":\"boolean\"}");
    assert_eq!(code(&kleene(&["simsearch", &bad, &ab])), 2);
}

#[test]
fn functional_merge_chain() {
    let dir = tempfile::tempdir().unwrap();
    let split = r#"{"semiring":"boolean","alphabet":["a"],"dim":3,"alpha":[1,0,0],"beta":[0,1,1],"M":{"a":[[0,1,1],[0,0,0],[0,0,0]]}}"#;
    let single =
        r#"{"semiring":"boolean","alphabet":["a"],"dim":2,"alpha":[1,0],"beta":[0,1],"M":{"a":[[0,1],[0,0]]}}"#;
    let good = format!(
        r#"{{"automata":[{split},{single}],"steps":[{{"matrix":[[1,0],[0,1],[0,1]],"orientation":"forward"}}]}}"#
    );
    let o = kleene(&["chain", &write(dir.path(), "good.json", &good), "--json"]);
    assert_eq!(code(&o), 0);
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["strong"], true);
    assert_eq!(j["shapes"][0], "functional");
    let broken = good.replace("[[1,0],[0,1],[0,1]]", "[[0,0],[0,0],[0,0]]");
    let o = kleene(&["chain", &write(dir.path(), "broken.json", &broken), "--json"]);
    assert_eq!(code(&o), 1);
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["broken_link"], 0);
}

#[test]
fn axioms_report_and_reproduce() {
    let o = kleene(&["axioms", "--semiring", "chain(3)", "--trials", "40", "--seed", "42"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("all 10 suites pass on chain(3)"));
    // ω iterates cannot reach the default bound within the horizon
    let args = ["axioms", "--semiring", "nat-inf", "--trials", "40", "--seed", "42", "--suite", "omega-power"];
    let o = kleene(&args);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("reproducer: {\"semiring\":\"nat-inf\""));
    let lowered = [&args[..], &["--omega-bound", "18"]].concat();
    assert_eq!(code(&kleene(&lowered)), 0);
    assert_eq!(code(&kleene(&["axioms", "--suite", "omega-power"])), 3);
    assert_eq!(code(&kleene(&["axioms", "--suite", "nonsense"])), 2);
}

#[test]
fn identical_flags_give_identical_output() {
    let args = ["axioms", "--semiring", "tropical", "--trials", "30", "--seed", "7", "--json"];
    assert_eq!(kleene(&args).stdout, kleene(&args).stdout);
    let probe = ["probe", "--trials", "20", "--seed", "3", "--json"];
    let (a, b) = (kleene(&probe), kleene(&probe));
    assert_eq!(a.stdout, b.stdout);
    let j: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(j["two_step"], 20);
    assert_eq!(j["searched"].as_u64().unwrap() + j["too_large"].as_u64().unwrap(), 20);
}
