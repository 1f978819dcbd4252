use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradalib"))
        .args(args)
        .env_remove("GRADALIB_SEED")
        .output()
        .expect("binary runs")
}

fn run_path(cmd: &str, path: &Path, extra: &[&str]) -> Output {
    let p = path.to_str().unwrap();
    let mut args = vec![cmd, p];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON report")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn kronecker_r1_is_ungradable_over_every_corpus_field() {
    for file in ["kronecker_R1.toml", "kronecker_R1_q.toml", "kronecker_R1_gf2.toml"] {
        let o = run_path("gradable", &corpus(file), &["--json"]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        let r = json(&o);
        assert_eq!(r["deterministic"]["verdicts"]["verdict"], "Ungradable", "{file}");
    }
    let o = run_path("gradable", &corpus("kronecker_R1_q.toml"), &[]);
    assert!(stdout(&o).contains("derivation system infeasible"));
}

#[test]
fn expect_mismatch_exits_one() {
    let o = run_path("gradable", &corpus("kronecker_R1.toml"), &["--expect", "gradable"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run_path("gradable", &corpus("kronecker_R1.toml"), &["--expect", "ungradable"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run_path("gradable", &corpus("k_x3_cyclic2.toml"), &["--expect", "gradable"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn pullup_window_cap_exits_three() {
    let o = run_path("pullup", &corpus("k_x3_cyclic2.toml"), &["--window", "0:99999"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run_path("pullup", &corpus("k_x3_cyclic2.toml"), &["--window", "-2:3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["deterministic"]["verdicts"]["piece_dims"]["0"], serde_json::json!([2]));
}

#[test]
fn unknown_budget_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let alg = std::fs::read_to_string(corpus("kronecker.toml")).unwrap().replace("GF(3)", "GF(5)");
    write(dir.path(), "k5.toml", &alg);
    let m = write(
        dir.path(),
        "band.toml",
        "algebra = \"k5.toml\"\n[spaces]\n\"1\" = 1\n\"2\" = 1\n[action]\na = [[1]]\nb = [[2]]\n",
    );
    let o = run_path("gradable", &m, &["--budget", "2"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.toml",
        "field = \"GF(3)\"\n[quiver]\nvertices = [\"1\"]\narrows = [{ name = \"x\", from = \"1\", to = \"1\", degree = \"one\" }]\n",
    );
    let o = run_path("check", &bad, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("bad.toml:4:"), "{}", stdout(&o));

    let extra = write(dir.path(), "extra.toml", "field = \"GF(3)\"\ncolour = 1\n[quiver]\nvertices = [\"1\"]\n");
    assert_eq!(run_path("check", &extra, &[]).status.code(), Some(2));

    std::fs::copy(corpus("kronecker.toml"), dir.path().join("kronecker.toml")).unwrap();
    let ragged = write(
        dir.path(),
        "ragged.toml",
        "algebra = \"kronecker.toml\"\n[spaces]\n\"1\" = 1\n\"2\" = 2\n[action]\na = [[1], [0, 1]]\n",
    );
    assert_eq!(run_path("check", &ragged, &[]).status.code(), Some(2));
}

#[test]
fn check_reports_algebra_shape() {
    let r = json(&run_path("check", &corpus("kronecker.toml"), &["--json"]));
    let v = &r["deterministic"]["verdicts"];
    assert_eq!(v["vertices"], 2);
    assert_eq!(v["arrows"], 2);
    assert_eq!(v["dim"], 4);

    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "k.toml", "field = \"Q\"\n[quiver]\nvertices = [\"1\"]\nrelations = []\n");
    let r = json(&run_path("check", &p, &["--json"]));
    assert_eq!(r["deterministic"]["verdicts"]["dim"], 1);
}

#[test]
fn verify_suite_passes_and_unknown_suite_lists_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cx");
    let o = run(&["verify", "--suite", "syzygy-window", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("syzygy-window: pass"));
    assert!(!out.exists());

    let o = run(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("f-conditions"));
}

#[test]
fn json_reports_are_deterministic_and_sorted() {
    let path = corpus("k_x3_cyclic2.toml");
    let args = ["gradable", path.to_str().unwrap(), "--json", "--seed", "5"];
    let (a, b) = (json(&run(&args)), json(&run(&args)));
    assert_eq!(a["deterministic"], b["deterministic"]);
    assert_eq!(a["deterministic"]["seed"], 5);
    let text = stdout(&run(&args));
    assert!(!text.contains('\r'));
    let det = serde_json::to_string(&a["deterministic"]).unwrap();
    let keys: Vec<&str> = a["deterministic"].as_object().unwrap().keys().map(String::as_str).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(det.contains("\"inputs\""));
    let hashes = a["deterministic"]["inputs"].as_object().unwrap();
    assert_eq!(hashes.len(), 2);
    assert!(hashes.values().all(|h| h.as_str().unwrap().len() == 64));
}

#[test]
fn seed_defaults_to_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gradalib"))
        .args(["check", corpus("kronecker.toml").to_str().unwrap(), "--json"])
        .env("GRADALIB_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&o)["deterministic"]["seed"], 42);
}

#[test]
fn certificate_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.toml");
    let o = run_path("gradable", &corpus("a3_111.toml"), &["--cert-out", cert.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert!(r["deterministic"]["certificates"]["grading"].as_str().unwrap().contains("graded = true"));
    let c = json(&run_path("check", &cert, &["--json"]));
    assert_eq!(c["deterministic"]["verdicts"]["graded"], true);
    assert_eq!(c["deterministic"]["verdicts"]["dims"], serde_json::json!([1, 1, 1]));
    let h = json(&run(&["hom", cert.to_str().unwrap(), corpus("a3_111.toml").to_str().unwrap(), "--json"]));
    assert_eq!(h["deterministic"]["verdicts"]["dim"], 1);
}

#[test]
fn enumerate_writes_loadable_modules() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "enumerate",
        "--algebra",
        corpus("k_x3.toml").to_str().unwrap(),
        "--max-dim",
        "3",
        "--graded",
        "--out",
        dir.path().to_str().unwrap(),
        "--json",
    ]);
    let r = json(&o);
    assert_eq!(r["deterministic"]["verdicts"]["count"], 3);
    assert_eq!(r["deterministic"]["verdicts"]["max_graded_length"], 3);
    for i in 0..3 {
        let m = dir.path().join(i.to_string()).join("module.toml");
        assert_eq!(run_path("check", &m, &[]).status.code(), Some(0));
    }
    let o = run(&["enumerate", "--algebra", corpus("kronecker_gf2.toml").to_str().unwrap(), "--max-dim", "2", "--json"]);
    assert_eq!(json(&o)["deterministic"]["verdicts"]["count"], 5);
}

#[test]
fn transpose_twice_returns_the_module() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once");
    let o = run_path("transpose", &corpus("kronecker_R0.toml"), &["--out", once.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let twice = dir.path().join("twice");
    run_path("transpose", &once.join("module.toml"), &["--out", twice.to_str().unwrap()]);
    let r = json(&run_path("check", &twice.join("module.toml"), &["--json"]));
    assert_eq!(r["deterministic"]["verdicts"]["dims"], serde_json::json!([1, 1]));

    let g = json(&run_path("transpose", &corpus("k_x3_cyclic2_graded.toml"), &["--json"]));
    assert_eq!(g["deterministic"]["verdicts"]["bound_holds"], true);
}

#[test]
fn syzygy_and_decompose() {
    let r = json(&run_path("syzygy", &corpus("k_x3_cyclic2_graded.toml"), &["--json"]));
    let v = &r["deterministic"]["verdicts"];
    assert_eq!(v["syzygy"]["support"], serde_json::json!([2, 2]));
    assert_eq!(v["window_holds"], true);
    let r = json(&run_path("syzygy", &corpus("k_x3_cyclic2.toml"), &["--json"]));
    assert_eq!(r["deterministic"]["verdicts"]["syzygy"]["dims"], serde_json::json!([1]));
    let r = json(&run_path("decompose", &corpus("a3_111.toml"), &["--json"]));
    assert_eq!(r["deterministic"]["verdicts"]["indecomposable"], true);
}

#[test]
fn prufer_scan_separates_r1_from_gradable_modules() {
    let r = json(&run_path("prufer", &corpus("kronecker_R1.toml"), &["--bound", "8", "--json"]));
    assert_eq!(r["deterministic"]["verdicts"]["stabilized"], false);
    assert_eq!(r["deterministic"]["verdicts"]["growth"][7], 8);
    let r = json(&run_path("prufer", &corpus("k_x3_cyclic2.toml"), &["--json"]));
    assert_eq!(r["deterministic"]["verdicts"]["stabilized"], true);
}

#[test]
fn pp_commands() {
    let m = corpus("k_x3_cyclic2.toml");
    let m = m.to_str().unwrap();
    let o = run(&["pp", "eval", m, "--a", "1", "--b", "x", "--tuple", "0,1", "--json"]);
    assert_eq!(json(&o)["deterministic"]["verdicts"]["holds"], true);
    let o = run(&["pp", "eval", m, "--a", "1", "--b", "x", "--tuple", "1,0", "--json"]);
    assert_eq!(json(&o)["deterministic"]["verdicts"]["holds"], false);
    let free = corpus("k_x3_free.toml");
    let o = run(&["pp", "leq", m, "--tuple", "1,0", free.to_str().unwrap(), "--target-tuple", "0,1,0", "--json"]);
    assert_eq!(json(&o)["deterministic"]["verdicts"]["holds"], true);
    let o = run(&["pp", "leq", m, "--tuple", "1,0", free.to_str().unwrap(), "--target-tuple", "1,0,0", "--json"]);
    assert_eq!(json(&o)["deterministic"]["verdicts"]["holds"], false);
    let o = run(&["pp", "generator", m, "--tuple", "1,0", "--json"]);
    assert_eq!(json(&o)["deterministic"]["verdicts"]["b"], "e_1, x*x, 0");
}
