use std::ffi::OsString;

use typereuse::bench::TASKS;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("typereuse").chain(args.iter().copied()).map(OsString::from);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = typereuse::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_query(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn psi_and_distance() {
    let (code, out, _) = run(&["psi", "int[][]"]);
    assert_eq!(code, 0);
    assert_eq!(out, "Array:2\ncollection:2\nint:1\nnumeric:1\n");
    let (code, out, _) = run(&["distance", "ArrayList<Integer>", "LinkedList<Double>"]);
    assert_eq!(code, 0);
    assert_eq!(out, "2/8 = 0.25\n");
    let (_, out, _) = run(&["distance", "Point", "MyPoint", "--corpus", "std", "--class", "MyPoint(x:int, y:int)"]);
    assert_eq!(out, "2/10 = 0.2\n");
    let (code, _, err) = run(&["psi", "Ghost"]);
    assert_eq!(code, 2);
    assert!(err.contains("Ghost"), "{err}");
    let (code, _, err) = run(&["distance", "int", "int", "--class", "Broken"]);
    assert_eq!(code, 2);
    assert!(err.contains("Name(field:type"), "{err}");
}

#[test]
fn align_lists_alignments_in_cost_order() {
    let (code, out, _) = run(&[
        "align",
        "--adapter",
        "void R(Point r1, long r2)",
        "--adaptee",
        "void E(int e1, int e2, long e3)",
        "--corpus",
        "std",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "m1 (e1, e2) -> (r1), (e3) -> (r2) @ 1/9 = 0.1111");
    let (code, _, err) = run(&["align", "--adapter", "void f(int a)", "--adaptee", "void g(List<Integer> b)"]);
    assert_eq!(code, 1);
    assert!(err.contains("no feasible alignment"));
}

#[test]
fn search_and_rank() {
    let (code, out, _) = run(&["search", "--corpus", "std", "--query", "multiply two matrices", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().next().unwrap().ends_with(" matrix.multiply"));

    let dir = tempfile::tempdir().unwrap();
    let q = write_query(&dir, "q.json", TASKS[0].source);
    let (code, out, _) = run(&["rank", "--corpus", "std", "--query-file", &q]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "1 1 25/63 geom.bresenham");
}

#[test]
fn synth_writes_plan() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_query(&dir, "q.json", TASKS[0].source);
    let plan_path = dir.path().join("plan.json");
    let (code, out, err) = run(&[
        "synth",
        "--corpus",
        "std",
        "--query",
        &q,
        "--adaptee",
        "geom.bresenham",
        "--alignment",
        "5",
        "--out",
        plan_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("external.bresenham(0, 0, v1, v2)"), "{out}");
    let plan: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(plan_path).unwrap()).unwrap();
    assert_eq!(plan["adaptee_id"], "geom.bresenham");

    let (code, _, _) = run(&["synth", "--corpus", "std", "--query", &q, "--adaptee", "geom.bresenham", "--alignment", "999"]);
    assert_eq!(code, 1);
    let (code, _, err) = run(&["synth", "--corpus", "std", "--query", &q, "--adaptee", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("nope"));
}

#[test]
fn reuse_success_failure_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_query(&dir, "q.json", TASKS[0].source);
    let (code, out, err) = run(&["reuse", "--corpus", "std", "--query", &q]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("adaptee: geom.bresenham\n"), "{out}");
    assert!(out.contains("res.add("));

    let result_path = dir.path().join("result.json");
    let (code, out, _) = run(&["reuse", "--corpus", "std", "--query", &q, "--json", "--out", result_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let printed: serde_json::Value = serde_json::from_str(&out).unwrap();
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&result_path).unwrap()).unwrap();
    assert_eq!(printed, written);
    assert_eq!(printed["outcome"], "success");
    assert_eq!(printed["adaptee"], "geom.bresenham");

    // Tests from a separate file that nothing can satisfy.
    let impossible = r#"[{"args": [{"t": "obj", "class": "MyPoint", "fields": {"x": {"t": "int", "v": 1}, "y": {"t": "int", "v": 1}}},
        {"t": "vec", "elem": "MyPoint", "items": []}],
        "expectParamStates": {"1": {"t": "vec", "elem": "MyPoint", "items": [
            {"t": "obj", "class": "MyPoint", "fields": {"x": {"t": "int", "v": -1}, "y": {"t": "int", "v": -2}}}]}}}]"#;
    let t = write_query(&dir, "t.json", impossible);
    let (code, _, err) = run(&["reuse", "--corpus", "std", "--query", &q, "--tests", &t, "--max-plans", "5"]);
    assert_eq!(code, 1);
    assert!(err.contains("no adapter passed"), "{err}");
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["reuse", "--corpus", "std"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("reuse"));
    assert_eq!(run(&["--version"]).0, 0);

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let (code, _, err) = run(&["reuse", "--corpus", "std", "--query", missing.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.json"), "{err}");
    let garbage = write_query(&dir, "bad.json", "{not json");
    assert_eq!(run(&["reuse", "--corpus", "std", "--query", &garbage]).0, 2);
    let no_tests = write_query(&dir, "nt.json", r#"{"name": "f", "params": [["a", "int"]], "returns": "int"}"#);
    let (code, _, err) = run(&["reuse", "--corpus", "std", "--query", &no_tests]);
    assert_eq!(code, 2);
    assert!(err.contains("no tests"));
    let bad_corpus = write_query(&dir, "c.jsonl", "{\"class\": 5}\n");
    let (code, _, err) = run(&["search", "--corpus", &bad_corpus, "--query", "x"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn bench_passes_all_tasks() {
    let (code, out, _) = run(&["bench"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("10/10 tasks passed\n"), "{out}");
    let (code, out, _) = run(&["bench", "--json"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 10);
    assert!(rows.as_array().unwrap().iter().all(|r| r["passed"] == true));
}
