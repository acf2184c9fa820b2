use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use relpress_core::format::parse_sig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relpress"))
}

fn system(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("systems").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

/// The value after `key=` on the first line containing it.
fn value(out: &str, key: &str) -> f64 {
    let pat = format!("{key}=");
    let line = out.lines().find(|l| l.contains(&pat)).unwrap();
    let v = line.split(&pat).nth(1).unwrap().split_whitespace().next().unwrap();
    parse_sig(v).unwrap()
}

const IDENTITY: &str = r#"{
  "alphabet_x": ["a", "b"],
  "edges_x": [["a", "a"], ["a", "b"], ["b", "a"]],
  "code": {"a": "a", "b": "b"},
  "markov": {"seed": 3}
}"#;

#[test]
fn check_example1() {
    let o = run(&["check", system("example1.system").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("irreducible: true"));
    assert!(out.contains("onto image presentation: true"));
    assert!(out.contains("hypotheses: ok"));
}

#[test]
fn check_reducible_fails_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "loops.system",
        r#"{"alphabet_x": ["a", "b"], "edges_x": [["a", "a"], ["b", "b"]], "code": {"a": "0", "b": "1"}}"#,
    );
    let o = run(&["check", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("irreducible: false"));
}

#[test]
fn malformed_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.system", "{\"alphabet_x\": [\"a\",");
    let o = run(&["check", &broken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let unknown = write(
        dir.path(),
        "unknown.system",
        r#"{"alphabet_x": ["a"], "edges_x": [["a", "a"]], "code": {"a": "a"}, "colour": 1}"#,
    );
    assert_eq!(run(&["check", &unknown]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent/file.system"]).status.code(), Some(2));
    assert_eq!(run(&["pressure"]).status.code(), Some(2));
}

#[test]
fn example1_point_values() {
    let f = system("example1.system");
    let f = f.to_str().unwrap();
    let o = run(&["pressure", f, "--point", "--n", "4", "--mode", "phi"]);
    assert_eq!(o.status.code(), Some(0));
    let phi = value(&stdout(&o), "phi");
    assert!((phi - 3f64.ln() / 4.0).abs() < 1e-12);
    let o = run(&["pressure", f, "--point", "--n", "200", "--mode", "theta"]);
    assert_eq!(value(&stdout(&o), "theta"), 0.0);
}

#[test]
fn theta_needs_a_point() {
    let f = system("example1.system");
    let o = run(&["pressure", f.to_str().unwrap(), "--word", "1 2 2", "--mode", "theta"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["pressure", f.to_str().unwrap(), "--word", "1 1", "--mode", "phi"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identity_pressure_is_zero_in_every_mode() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "id.system", IDENTITY);
    for mode in ["phi", "inf", "sup", "corollary"] {
        let o = run(&["pressure", &f, "--word", "a b a a b", "--mode", mode]);
        assert_eq!(o.status.code(), Some(0), "{mode}");
        assert_eq!(value(&stdout(&o), mode), 0.0);
    }
}

#[test]
fn periodic_cycles() {
    let f = system("example1.system");
    let f = f.to_str().unwrap();
    // Preimages of 2^∞ live on {2, 3, 4, 5}: the loop at 2 and the
    // component 3 -> {4, 5} -> 3 with spectral radius sqrt 2.
    let o = run(&["periodic", f, "--cycle", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let half_ln2 = format!("{:.12}", std::f64::consts::LN_2 / 2.0);
    assert!(out.contains(&format!("phi_exact: {half_ln2}")), "{out}");
    assert!(out.contains(&format!("T_exact: {half_ln2}")), "{out}");

    let o = run(&["periodic", f, "--cycle", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // Preimages of the word `12`: 1 2 and 1 3.
    assert!(out.contains("preimage blocks: 2"), "{out}");
    assert!(out.contains("(ok)"));

    assert_eq!(run(&["periodic", f, "--cycle", "1"]).status.code(), Some(2));
}

#[test]
fn golden_mean_cycle_mean() {
    let o = run(&["periodic", system("golden.system").to_str().unwrap(), "--cycle", "ab"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // f(a) + f(b) = 0.5 over a period of 2.
    assert!(out.contains("phi_exact: 0.250000000000"), "{out}");
    assert!(out.contains("T_exact: 0.250000000000"), "{out}");
}

#[test]
fn example1_table_rows() {
    let o = run(&["example1", "--kmax", "3", "--exact-kmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("\n1,4,3,1,"), "{out}");
    assert!(out.contains("\n3,20,17,1,"), "{out}");
    assert!(out.contains("checks: ok"));
}

#[test]
fn experiment_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let f = system("markov4.system");
    for (out, jobs) in [(&a, "1"), (&b, "3")] {
        let o = bin()
            .args(["experiment", f.to_str().unwrap(), "--samples", "3", "--seed", "7", "--n-grid", "20,60"])
            .arg("--out")
            .arg(out)
            .env("RELPRESS_JOBS", jobs)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("ChaCha8"));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("seed,sample_id,n,psi_inf,psi_sup,phi,theta,T_exact,phi_exact,gap_psi_T\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 2);
    assert!(!text.contains('\r'));
}

#[test]
fn identity_experiment_has_zero_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "id.system", IDENTITY);
    let o = run(&["experiment", &f, "--samples", "4", "--n-grid", "10,40"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    for line in csv.lines().skip(1) {
        assert_eq!(line.rsplit(',').next(), Some("0"), "{line}");
    }
}

#[test]
fn example1_point_experiment_gap() {
    let f = system("example1.system");
    let o = run(&["experiment", f.to_str().unwrap(), "--point", "--n-grid", "4,20,268"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let gaps: Vec<f64> = csv.lines().skip(1).map(|l| parse_sig(l.rsplit(',').next().unwrap()).unwrap()).collect();
    assert_eq!(gaps.len(), 3);
    assert!((gaps[0] - 3f64.ln() / 4.0).abs() < 1e-11);
    assert!((gaps[2] - 0.165527684910).abs() < 1e-11);
}

#[test]
fn experiment_without_markov_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "nomarkov.system",
        r#"{"alphabet_x": ["a", "b"], "edges_x": [["a", "a"], ["a", "b"], ["b", "a"]], "code": {"a": "a", "b": "b"}}"#,
    );
    assert_eq!(run(&["experiment", &f, "--samples", "1"]).status.code(), Some(2));
}

#[test]
fn printed_values_round_trip() {
    let f = system("golden.system");
    let o = run(&["pressure", f.to_str().unwrap(), "--point", "--n", "7,30", "--mode", "sup"]);
    let out = stdout(&o);
    for line in out.lines() {
        let text = line.split("sup=").nth(1).unwrap();
        let v = parse_sig(text).unwrap();
        assert_eq!(relpress_core::format::fmt_sig(v), text);
    }
}
