use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn pgcl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgcl")).args(args).output().expect("binary runs")
}

fn pgcl_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pgcl"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

const COIN_LOOP: &str = "var c in {H, T}\nc := H; WHILE c = H DO c :in H <1/2> T OD";
const SPIN: &str = "var c in {H, T}\nWHILE true DO SKIP OD";

#[test]
fn wp_of_two_coins_is_constant_half() {
    let o = pgcl(&["wp", "--program", &data("twocoins.pgcl"), "--post", "c1 = c2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("constant 1/2"));
    assert_eq!(out.lines().filter(|l| l.ends_with(": 1/2")).count(), 4);
}

#[test]
fn wp_json_maps_states_to_rational_strings() {
    let o = pgcl(&["wp", "--program", &data("twocoins.pgcl"), "--post", "c1 = c2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pre = v["pre"].as_object().unwrap();
    assert_eq!(pre.len(), 4);
    assert!(pre.values().all(|x| x == "1/2"));
    assert_eq!(v["constant"], "1/2");
    assert_eq!(v["loop_residual"], "0/1");
}

#[test]
fn program_can_come_from_stdin() {
    let text = std::fs::read_to_string(data("twocoins.pgcl")).unwrap();
    let o = pgcl_stdin(&["wp", "--program", "-", "--post", "c1 = H"], &text);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().next(), Some("constant 1/2"));
    let o = pgcl_stdin(&["wp", "--program", "-", "--post", "c = T"], COIN_LOOP);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("loop residual "));
}

#[test]
fn parameters_override_the_header() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.pgcl", "var x in {0, 1}\nparam p = 1/3\nx :in 1 <p> 0");
    let o = pgcl(&["wp", "--program", &f, "--post", "x", "--param", "p=3/4"]);
    assert_eq!(stdout(&o).lines().next(), Some("constant 3/4"));
}

#[test]
fn slow_loop_under_a_small_budget_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "slow.pgcl", "var x in {0..3}\nWHILE x < 3 DO x := x + 1 <1/3> SKIP OD");
    assert_eq!(code(&pgcl(&["wp", "--program", &f, "--post", "x = 3", "--max-iters", "5"])), 3);
    assert_eq!(code(&pgcl(&["wp", "--program", &f, "--post", "x = 3"])), 0);
}

#[test]
fn equal_and_unequal_programs() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.pgcl", "var x in {0, 1}\nx :in 1 <1/3> 0");
    let b = write(&dir, "b.pgcl", "var x in {0, 1}\nx :in 1 <1/2> 0");
    let c = write(&dir, "c.pgcl", "var x in {0, 1}\nx :in 0 <2/3> 1");
    assert_eq!(code(&pgcl(&["check-equal", "--left", &a, "--right", &c])), 0);
    let o = pgcl(&["check-equal", "--left", &a, "--right", &b]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("fails"));
}

#[test]
fn grid_sweep_over_a_parameter() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.pgcl", "var x in {0, 1}\nx :in 1 <p> 0");
    let split = write(
        &dir,
        "split.pgcl",
        "var x in {0, 1}\nvar q in {0, 1/4, 1/2, 3/4, 1}\nvar r in {0, 1/4, 1/2, 3/4, 1}\n\
         IF p <= 1/2 -> q, r := 0, 2*p [] p >= 1/2 -> q, r := 2*p - 1, 1 FI;\n(x :in 1 <q> 0) <1/2> (x :in 1 <r> 0)",
    );
    let o = pgcl(&["check-equal", "--left", &spec, "--right", &split, "--observe", "x", "--grid", "p=uniform:8"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let o = pgcl(&["check-equal", "--left", &spec, "--right", &split, "--observe", "x", "--grid", "p=uniform:8", "--json"]);
    let rows: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 9);
}

#[test]
fn clashing_domains_are_rejected() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.pgcl", "var x in {0, 1}\nSKIP");
    let b = write(&dir, "b.pgcl", "var x in {0, 1, 2}\nSKIP");
    assert_eq!(code(&pgcl(&["check-equal", "--left", &a, "--right", &b])), 2);
}

#[test]
fn refinement_direction_matters() {
    let dir = TempDir::new().unwrap();
    let demon = write(&dir, "d.pgcl", "var x in {0, 1}\nx :in {0, 1}");
    let coin = write(&dir, "c.pgcl", "var x in {0, 1}\nx :in 1 <1/2> 0");
    assert_eq!(code(&pgcl(&["check-refines", "--spec", &demon, "--impl", &coin])), 0);
    assert_eq!(code(&pgcl(&["check-refines", "--spec", &coin, "--impl", &demon])), 1);
}

#[test]
fn variant_checks() {
    let dir = TempDir::new().unwrap();
    let coin = write(&dir, "coin.pgcl", COIN_LOOP);
    let spin = write(&dir, "spin.pgcl", SPIN);
    assert_eq!(code(&pgcl(&["check-variant", "--program", &coin, "--variant", "[c = H]", "--bound", "1", "--epsilon", "1/2"])), 0);
    let o = pgcl(&["check-variant", "--program", &spin, "--variant", "0", "--bound", "1", "--epsilon", "1/2"]);
    assert_eq!(code(&o), 1);
    let o = pgcl(&["check-variant", "--program", &spin, "--variant", "0", "--bound", "1", "--epsilon", "1/2", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "fails");
}

#[test]
fn scripted_sampling() {
    let o = pgcl(&["sample", "--dist", "1,1,1,1,1,1", "--bits", "000"]);
    assert_eq!(stdout(&o).trim(), "outcome=1 flips=3 bits=000");
    let o = pgcl(&["sample", "--dist", "1,1,1,1,1,1", "--bits", "00"]);
    assert_eq!(code(&o), 2);
    let o = pgcl(&["sample", "--p", "1/2", "--bits", "1", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.to_string().contains("\"flips\":1"), "{v}");
}

#[test]
fn seeded_sampling_is_reproducible() {
    let a = stdout(&pgcl(&["sample", "--p", "1/3", "--seed", "4", "--count", "20"]));
    let b = stdout(&pgcl(&["sample", "--p", "1/3", "--seed", "4", "--count", "20"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 20);
}

#[test]
fn die_trials_from_a_file() {
    let o = pgcl(&["trials", "--dist", &data("die.txt"), "--runs", "60000", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "60000");
    assert_eq!(lines[1], "1 1 1 1 1 1");
    assert_eq!(lines[2], "Relative frequencies");
    let freqs: Vec<f64> = lines[3].split_whitespace().map(|f| f.parse().unwrap()).collect();
    assert_eq!(freqs.len(), 6);
    assert!(freqs.iter().all(|f| (0.95..1.05).contains(f)), "{freqs:?}");
    assert!(lines[4].starts_with("realised, using ") && lines[4].ends_with(" flips on average."));
}

#[test]
fn trials_json_and_crosscheck() {
    let o = pgcl(&["trials", "--dist", "1,2", "--runs", "50000", "--seed", "2", "--crosscheck", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let tallies: u64 = v["report"]["tallies"].as_array().unwrap().iter().map(|t| t.as_u64().unwrap()).sum();
    assert_eq!(tallies, 50_000);
    assert!(v["crosscheck"].is_object());
}

#[test]
fn machine_analysis_of_the_die() {
    let o = pgcl(&["machine-analyze", "--dist", "1,1,1,1,1,1"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("nodes=17 expected_flips=4/1"));
    assert_eq!(out.lines().filter(|l| l.ends_with("=1/6")).count(), 6);
    let o = pgcl(&["machine-analyze", "--machine", &data("knuth-yao-die.machine"), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["expected_flips"], "11/3");
    assert_eq!(v["node_count"], 13);
}

#[test]
fn machine_build_round_trips_through_a_file() {
    let dir = TempDir::new().unwrap();
    let text = stdout(&pgcl(&["machine-build", "--dist", "2,1,3,4"]));
    let f = write(&dir, "m.machine", &text);
    let o = pgcl(&["machine-analyze", "--machine", &f]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("nodes=18 "));
}

#[test]
fn machine_dot_to_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("die.dot");
    let o = pgcl(&["machine-dot", "--dist", "1,1,1,1,1,1", "--out", &out.display().to_string()]);
    assert_eq!(code(&o), 0);
    let dot = std::fs::read_to_string(Path::new(&out)).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 22);
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.pgcl", "var x in {0, 1}\nx := ");
    assert_eq!(code(&pgcl(&["bogus"])), 2);
    assert_eq!(code(&pgcl(&["wp", "--program", &bad, "--post", "x"])), 2);
    assert_eq!(code(&pgcl(&["wp", "--program", "/nonexistent/file", "--post", "x"])), 2);
    assert_eq!(code(&pgcl(&["machine-analyze", "--dist", "1,0"])), 2);
    let o = pgcl(&["wp", "--program", &bad, "--post", "x"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:"));
}
