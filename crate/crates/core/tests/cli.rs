use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lueroth-kit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const Q: &str = "x1^2 + x2^2 + x3^2";
const C: &str = "x1^3 + x2^3 - x3^3 - (x1 + x2 + x3)^3";

#[test]
fn fermat_catalecticant() {
    let o = run(&["--format", "json", "catalecticant", "x1^4 + x2^4 + x3^4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["det"], "0");
    assert_eq!(v["rank"], 3);
    let texts: Vec<&str> = v["kernel"].as_array().unwrap().iter().map(|k| k["text"].as_str().unwrap()).collect();
    assert_eq!(texts, ["e1*e2", "e1*e3", "e2*e3"]);
}

#[test]
fn leading_minus_is_an_expression() {
    let o = run(&["scorza", "-x1^4 - x2^4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains('0'));
}

#[test]
fn morley_subcommands() {
    let o = run(&["morley", "--tangent-rank", "--Q", Q, "--C", C]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains('7'));
    let o = run(&["--format", "json", "morley", "--pfaffian", "--Q", Q, "--C", C]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"0\""));
    let o = run(&["morley", "--kernel", "--Q", Q, "--C", C]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("e1^2 + e2^2 + e3^2"));
}

#[test]
fn bateman_json_keys() {
    let o = run(&["--format", "json", "bateman", "--Q", "e1^2 + e2^2 + e3^2", "--C", C]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let s = v.to_string();
    assert!(s.contains("d_1_11") && s.contains("d_3_33"), "{s}");
}

#[test]
fn exit_codes() {
    // wrong degree is an input error
    assert_eq!(run(&["catalecticant", "x1^3"]).status.code(), Some(2));
    assert_eq!(run(&["catalecticant", "x1^4 +"]).status.code(), Some(2));
    assert_eq!(run(&["clebsch", "--lines", "/nonexistent/lines.json"]).status.code(), Some(2));
    // a zero tuple has no kernel pencil: a failed check
    let o = run(&["morley", "--kernel", "--Q", "x1^2", "--C", "x2^3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rank"));
}

#[test]
fn random_is_seeded() {
    let a = run(&["random", "--kind", "quartic", "--seed", "3"]);
    let b = run(&["random", "--kind", "quartic", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        stdout(&a).trim(),
        "-2*x1^4 + x1^3*x2 - 3*x1^3*x3 - 3*x1^2*x2^2 - 2*x1^2*x2*x3 + 5*x1^2*x3^2 - x1*x2^3 + 3*x1*x2^2*x3 \
         - 3*x1*x2*x3^2 - 3*x1*x3^3 + x2^4 - 2*x2^2*x3^2 + 3*x2*x3^3 + x3^4"
    );
}

#[test]
fn seed_one_pair_pinned() {
    let o = run(&["random", "--kind", "bateman-pair", "--seed", "1"]);
    assert_eq!(
        stdout(&o),
        "Q = -x1^2 - 3*x1*x2 + x1*x3 - 2*x2^2 - 2*x3^2\n\
         C = 3*x1^3 + x1^2*x3 - 3*x1*x2^2 - 2*x1*x2*x3 + 3*x2^3 + 3*x2^2*x3 - x2*x3^2\n"
    );
    assert_ne!(o.stdout, run(&["random", "--kind", "bateman-pair", "--seed", "2"]).stdout);
}

#[test]
fn verify_filtered_group() {
    let a = run(&["--seed", "42", "--format", "json", "verify-paper", "--only", "morley"]);
    let b = run(&["--seed", "42", "--format", "json", "verify-paper", "--only", "morley"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 6);
    assert!(run(&["verify-paper", "--only", "nonsense"]).status.code() == Some(2));
}

#[test]
fn repcheck_table() {
    let o = run(&["repcheck"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("V3 + V2 + 1"));
}
