use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

const SUM: &str = "(dtr [0] R1 (comp (prod proj0 proj0) (comp dup (prim add))))";
const DELAY: &str = "(dtr [0] R1 swap)";

fn file(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn causal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causal"))
        .args(args)
        .output()
        .unwrap()
}

fn causal_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_causal"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<String> {
    stdout(o).lines().map(str::to_string).collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn running_sum_and_delay() {
    let sum = file("sum.sfg", SUM);
    let delay = file("delay.sfg", DELAY);
    let input = file("123.csv", "1\n2\n3\n");
    let o = causal(&["run", path(&sum), "--input", path(&input)]);
    assert!(o.status.success());
    assert_eq!(lines(&o), ["1", "3", "6"]);
    let o = causal(&["run", path(&delay), "--input", path(&input)]);
    assert_eq!(lines(&o), ["0", "1", "2"]);
}

#[test]
fn empty_input_gives_empty_output() {
    let sum = file("sum-empty.sfg", SUM);
    let o = causal_stdin(&["run", path(&sum), "--input", "-"], "");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
}

#[test]
fn registers_can_be_overridden() {
    let delay = file("delay-init.sfg", DELAY);
    let o = causal_stdin(
        &["run", path(&delay), "--input", "-", "--init", "0=1/2"],
        "1\n2\n",
    );
    assert_eq!(lines(&o), ["0.5", "1"]);
    let o = causal_stdin(
        &["run", path(&delay), "--input", "-", "--init", "3=1"],
        "1\n",
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn smooth_and_finite_bases() {
    let sum = file("sum-smooth.sfg", SUM);
    let o = causal_stdin(
        &["run", path(&sum), "--base", "smooth", "--input", "-"],
        "0.5\n0.25\n",
    );
    assert_eq!(lines(&o), ["0.5", "0.75"]);
    let parity = file("parity.sfg", "(dtr [0] Z2 (comp dup (add Z2)))");
    let o = causal_stdin(
        &["run", path(&parity), "--base", "fin", "--input", "-"],
        "1\n1\n1\n",
    );
    assert_eq!(lines(&o), ["1", "0", "1"]);
}

#[test]
fn exit_codes() {
    let sum = file("sum-codes.sfg", SUM);
    let o = causal_stdin(&["run", path(&sum), "--input", "-"], "1,2\n");
    assert_eq!(o.status.code(), Some(3));
    let o = causal(&["run", path(&sum), "--ticks", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let broken = file("broken.sfg", "(comp id\n  (prod id");
    let o = causal(&["run", path(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:"));
    let ill = file("ill.sfg", "(comp (poly 2 \"x0\") (poly 1 \"x0\"))");
    assert_eq!(causal(&["run", path(&ill)]).status.code(), Some(2));
    assert_eq!(causal(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(
        causal(&["diff", path(&sum), "--base", "fin"]).status.code(),
        Some(2)
    );
}

#[test]
fn later_inputs_never_change_earlier_outputs() {
    let c = file(
        "mix.sfg",
        "(dtr [1] R1 (comp (poly 2 \"x0 + x1\" \"x0*x1 - x1*x1\") (prod id (poly 1 \"2*x0 + 1\"))))",
    );
    let short = causal_stdin(&["run", path(&c), "--input", "-"], "1\n-2\n3\n");
    let long = causal_stdin(&["run", path(&c), "--input", "-"], "1\n-2\n3\n7\n1/3\n");
    let (a, b) = (lines(&short), lines(&long));
    assert_eq!(a.len(), 3);
    assert_eq!(a[..], b[..3]);
}

#[test]
fn derivative_of_delay_is_delayed_tangent() {
    let delay = file("delay-diff.sfg", DELAY);
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join("delay-d.sfg");
    let o = causal(&["diff", path(&delay), "--emit", path(&out)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("dtr [0 0]"), "{}", text);
    // records are (tangent, point)
    let o = causal_stdin(&["run", path(&out), "--input", "-"], "4,1\n5,2\n6,3\n");
    assert_eq!(lines(&o), ["0", "4", "5"]);
}

#[test]
fn derivative_of_stateless_circuit_has_no_register() {
    let sq = file("square.sfg", "(poly 1 \"x0*x0\")");
    let o = causal(&["diff", path(&sq)]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("dtr"));
}

#[test]
fn unrolling_is_printed_as_a_circuit() {
    let sum = file("sum-unroll.sfg", SUM);
    let o = causal(&["unroll", path(&sum), "--tick", "2"]);
    assert!(o.status.success());
    let un = file("un.sfg", &stdout(&o));
    let o = causal_stdin(&["run", path(&un), "--input", "-"], "1,2,3\n");
    assert_eq!(lines(&o), ["6"]);
}

#[test]
fn check_reports_pass_and_yanking_witness() {
    let o = causal(&["check", "cd-axioms", "--seed", "7", "--cases", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suite"], "cd-axioms");

    let o = causal(&["check", "trace-axioms", "--cases", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let w = &v["witnesses"][0];
    assert_eq!(w["law"], "yanking");
    assert_eq!(w["evidence"]["tick"], 0);
}

#[test]
fn horizon_zero_and_determinism() {
    let a = causal(&[
        "check",
        "dinaturality",
        "--horizon",
        "0",
        "--seed",
        "5",
        "--cases",
        "3",
    ]);
    assert!(a.status.success());
    let b = causal(&[
        "check",
        "dinaturality",
        "--horizon",
        "0",
        "--seed",
        "5",
        "--cases",
        "3",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unsupported_suite_base_is_a_usage_error() {
    let o = causal(&["check", "squd-props", "--base", "fin"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rnn_demo_with_zero_rate_is_flat() {
    let o = causal(&["rnn-demo", "--steps", "3", "--lr", "0", "--json"]);
    assert!(o.status.success());
    let steps: Vec<serde_json::Value> = lines(&o)
        .iter()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(steps.len(), 3);
    assert_eq!(steps[0]["loss"], steps[2]["loss"]);
    assert!(steps
        .iter()
        .all(|s| s["deviation"].as_f64().unwrap() <= 1e-10));
    assert_eq!(
        causal(&["rnn-demo", "--base", "poly"]).status.code(),
        Some(2)
    );
}
