//! End-to-end runs of the command-line front end against the bundled fixtures.

use ncline::cli::run_args;
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.alg", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut all = vec!["ncline"];
    all.extend_from_slice(args);
    let o = run_args(all);
    (o.code, o.stdout, o.stderr)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out, err) = run(&all);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("bad JSON ({e}): {out}\n{err}"));
    (code, v)
}

#[test]
fn groebner_basis_of_the_cyclic_relation() {
    let c3 = fixture("cyclic3");
    let (code, v) = json(&["gb", "--in", &c3, "--bound", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["size"], 1);
    assert_eq!(v["result"]["complete"], true);
    assert_eq!(v["certification"]["bound"], 10);
    // a_d = 3 a_{d-1} - a_{d-2}
    let mut a = vec![1i64, 3];
    while a.len() < 11 {
        let k = a.len();
        a.push(3 * a[k - 1] - a[k - 2]);
    }
    let counts: Vec<i64> = v["result"]["normal_word_counts"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert_eq!(counts, a);
}

#[test]
fn coherence_certificate_json() {
    let c3 = fixture("cyclic3");
    let (code, v) = json(&["coherence-cert", "--in", &c3, "--bound", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["result"]["certificate"]["kind"], "rnci");
    assert_eq!(v["result"]["check"]["valid"], true);
}

#[test]
fn distinguishes_lines_with_different_generator_counts() {
    let (code, out, _) = run(&["distinguish", "--a", &fixture("p1_3"), "--b", &fixture("p1_4")]);
    assert_eq!(code, 0);
    assert!(out.contains("non-isomorphic"), "{out}");
    let (code, v) = json(&["distinguish", "--a", &fixture("commutative_plane"), "--b", &fixture("quantum_plane")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"]["verdict"], "indistinguishable");
}

const COMMANDS: &[&[&str]] = &[
    &["gb", "--in", "cyclic3", "--bound", "6"],
    &["normal-words", "--in", "weighted", "--degree", "5"],
    &["hilbert", "--in", "sum_of_squares4", "--bound", "8"],
    &["rank", "--in", "p1_4"],
    &["decompose", "--in", "cyclic3", "--seed", "7"],
    &["regular", "--in", "weighted"],
    &["coherence-cert", "--in", "p1_4", "--bound", "8"],
    &["betti", "--in", "cyclic3", "--bound", "6"],
    &["chain-witness", "--bound", "7"],
    &["gamma", "--in", "quantum_plane", "--bound", "4"],
    &["chi", "--in", "cyclic3"],
    &["cohomology", "--in", "commutative_plane", "--bound", "3"],
    &["kronecker", "--in", "commutative_plane"],
    &["koszul-dual", "--in", "sum_of_squares4", "--bound", "6"],
    &["twist", "--in", "commutative_plane", "--sigma", "x,2*y"],
];

fn resolve(args: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    let mut after_in = false;
    for a in args {
        out.push(if after_in { fixture(a) } else { a.to_string() });
        after_in = *a == "--in";
    }
    out
}

#[test]
fn identical_requests_give_identical_json() {
    for cmd in COMMANDS {
        let args = resolve(cmd);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let mut a = args.clone();
        a.extend(["--format", "json"]);
        let first = run(&a);
        let second = run(&a);
        assert_eq!(first.0, 0, "{cmd:?}: {}", first.1);
        assert_eq!(first.1, second.1, "{cmd:?}");
        let jobs = {
            let mut j = a.clone();
            j.extend(["--jobs", "2"]);
            run(&j)
        };
        assert_eq!(first.1, jobs.1, "{cmd:?} with --jobs");
    }
}

fn scalars_in(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.values().for_each(|x| scalars_in(x, out)),
        Value::Array(a) => a.iter().for_each(|x| scalars_in(x, out)),
        Value::Number(n) => out.push(n.to_string()),
        Value::Bool(b) => out.push(b.to_string()),
        Value::String(s) => out.push(s.clone()),
        Value::Null => {}
    }
}

#[test]
fn reports_follow_the_schema() {
    for cmd in COMMANDS {
        let args = resolve(cmd);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (_, v) = json(&args);
        let mut raw = args.clone();
        raw.extend(["--format", "json"]);
        let (_, out, _) = run(&raw);
        let pos: Vec<usize> = ["schema", "command", "request", "status", "certification", "result", "warnings"]
            .iter()
            .map(|k| out.find(&format!("\n  \"{k}\":")).unwrap_or_else(|| panic!("{cmd:?} lacks {k}")))
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{cmd:?}: top-level keys out of order");
        assert_eq!(v.as_object().unwrap().len(), 7);
        assert_eq!(v["schema"], "ncline-report/1");
        assert_eq!(v["command"], cmd[0]);
        assert!(["ok", "inconclusive", "error"].contains(&v["status"].as_str().unwrap()));
        let req = v["request"].as_object().unwrap();
        for k in ["input", "bound", "field", "seed"] {
            assert!(req.contains_key(k), "{cmd:?} request lacks {k}");
        }
        assert!(v["request"]["input"].is_array());
        assert!(v["warnings"].is_array());
        assert!(v["certification"].is_object());

        let (_, text, _) = run(&args);
        let mut cert = Vec::new();
        scalars_in(&v["certification"], &mut cert);
        for s in cert {
            assert!(text.contains(&s), "{cmd:?}: certification value {s} missing from text output");
        }
        assert!(text.starts_with(&format!("ncline {} [ncline-report/1]", cmd[0])));
    }
}

#[test]
fn seeds_are_echoed_and_reproducible() {
    let c3 = fixture("cyclic3");
    let (_, a) = json(&["decompose", "--in", &c3, "--seed", "3"]);
    let (_, b) = json(&["decompose", "--in", &c3, "--seed", "3"]);
    assert_eq!(a, b);
    assert_eq!(a["request"]["seed"], 3);
}

#[test]
fn input_errors_exit_with_two() {
    let missing = run(&["gb", "--in", "/nonexistent/file.alg"]);
    assert_eq!(missing.0, 2);
    assert!(!missing.2.is_empty());
    assert_eq!(run(&["gb", "--inline", "gens x y; rel x*;"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["gb"]).0, 2);
    assert_eq!(run(&["gb", "--in", &fixture("cyclic3"), "--field", "F4"]).0, 2);
    assert_eq!(run(&["gb", "--in", &fixture("cyclic3"), "--field", "F2"]).0, 2);
    // a weighted relation has no quadratic tensor
    assert_eq!(run(&["rank", "--in", &fixture("weighted")]).0, 2);
    let (code, v) = json(&["rank", "--in", &fixture("weighted")]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
}

#[test]
fn bound_exhaustion_exits_with_three() {
    let (code, v) = json(&["betti", "--in", &fixture("cyclic3"), "--bound", "3"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "inconclusive");
    assert!(!v["warnings"].as_array().unwrap().is_empty());
    let (code, _, _) = run(&["gb", "--in", &fixture("noncoherent"), "--order", "y,z,x", "--bound", "6"]);
    assert_eq!(code, 3);
}

#[test]
fn negative_verdicts_exit_with_zero() {
    let (code, v) = json(&["regular", "--in", &fixture("rank_one")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["is_regular"], false);
    let (code, _) = json(&["distinguish", "--a", &fixture("p1_3"), "--b", &fixture("p1_4")]);
    assert_eq!(code, 0);
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for c in ["gb", "normal-words", "hilbert", "rank", "decompose", "regular", "strongly-free", "coherence-cert", "ideal-pres", "betti", "chain-witness", "gamma", "chi", "cohomology", "kronecker", "koszul-dual", "twist", "distinguish"] {
        assert!(out.contains(c), "help lacks {c}");
    }
}

/// Leading Hilbert coefficients of every fixture, each derived by hand from its normal words.
#[test]
fn golden_fixture_series() {
    let golden: &[(&str, &[i64])] = &[
        ("cyclic3", &[1, 3, 8, 21, 55, 144]),
        ("p1_3", &[1, 3, 8, 21, 55, 144]),
        ("p1_3_deformed", &[1, 3, 8, 21, 55, 144]),
        ("p1_4", &[1, 4, 15, 56, 209, 780]),
        ("sum_of_squares4", &[1, 4, 15, 56, 209, 780]),
        ("commutative_plane", &[1, 2, 3, 4, 5, 6]),
        ("quantum_plane", &[1, 2, 3, 4, 5, 6]),
        ("weighted", &[1, 1, 2, 2, 3, 3]),
        // normal words y^a x^b
        ("rank_one", &[1, 2, 3, 4, 5, 6]),
        // words avoiding zx and zy: (x|y)^* z^*, i.e. sum of 2^i
        ("noncoherent", &[1, 3, 7, 15, 31, 63]),
    ];
    for (name, expect) in golden {
        let (code, v) = json(&["hilbert", "--in", &fixture(name), "--bound", "5"]);
        assert_eq!(code, 0, "{name}");
        let got: Vec<i64> = v["result"]["coefficients"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        assert_eq!(&got, expect, "{name}");
    }
}

#[test]
fn strongly_free_verdicts() {
    let s4 = fixture("sum_of_squares4");
    let (code, v) = json(&["strongly-free", "--in", &s4, "--x", "x3,x4", "--bound", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"]["verdict"], "certified");
}
