use std::collections::BTreeMap;

use typereuse_core::align::{build_variables, enumerate_alignments, solve_optimal, DEFAULT_MAX_GROUP};
use typereuse_core::distance::Cost;
use typereuse_core::driver::{code_reuse, compute_type_distance_matrix, CandidateOutcome, ReuseConfig, ReuseQuery};
use typereuse_core::runtime::{eval_plan, run_tests, standard_registry, TestCase, Value};
use typereuse_core::synth::{emit_pseudo_source, generate_adapter, AdapterPlan, Conversion};
use typereuse_core::typemodel::{
    parse_signature, ClassDef, ClassRecord, Corpus, CorpusBuilder, MethodRecord, Type, TypeEnv,
};

fn class(name: &str) -> ClassRecord {
    ClassRecord {
        name: name.into(),
        fields: vec![("x".into(), "int".into()), ("y".into(), "int".into())],
        constructible: true,
        gettable: true,
    }
}

fn method(id: &str, name: &str, doc: &str, params: &[(&str, &str)], returns: &str, builtin: &str) -> MethodRecord {
    MethodRecord {
        id: id.into(),
        name: name.into(),
        doc: doc.into(),
        params: params.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        returns: returns.into(),
        builtin: builtin.into(),
        out_params: vec![],
    }
}

fn corpus() -> Corpus {
    let mut b = CorpusBuilder::default();
    b.add_class(&class("Point")).unwrap();
    b.add_method(&method(
        "geom.bresenham",
        "bresenham",
        "Rasterize the line between two points with Bresenham's line algorithm.",
        &[("x0", "int"), ("y0", "int"), ("x1", "int"), ("y1", "int")],
        "Point[]",
        "bresenham",
    ))
    .unwrap();
    b.add_method(&method(
        "geom.circle",
        "midpointCircle",
        "Rasterize a circle around a center point with the midpoint algorithm.",
        &[("cx", "int"), ("cy", "int"), ("r", "int")],
        "Point[]",
        "midpoint_circle",
    ))
    .unwrap();
    b.add_method(&method(
        "text.anagram",
        "isAnagram",
        "Check whether two strings are anagrams of each other.",
        &[("a", "String"), ("b", "String")],
        "boolean",
        "is_anagram",
    ))
    .unwrap();
    b.finish().unwrap()
}

fn my_point_env() -> TypeEnv {
    let my_point = ClassDef::new("MyPoint", vec![("x".into(), Type::int()), ("y".into(), Type::int())], true, true);
    TypeEnv::from_classes([my_point.unwrap()]).unwrap()
}

fn my_point(x: i32, y: i32) -> Value {
    Value::obj("MyPoint", [("x", Value::Int(x)), ("y", Value::Int(y))])
}

fn vector(items: Vec<Value>) -> Value {
    Value::sequence_of(&parse_type_in("Vector<MyPoint>"), items).unwrap()
}

fn parse_type_in(text: &str) -> Type {
    let env = corpus().env.merged(&my_point_env()).unwrap();
    typereuse_core::typemodel::parse_type(text, &env).unwrap()
}

fn draw_line_test() -> TestCase {
    let expected: Vec<Value> = [(0, 0), (1, 1), (2, 1), (3, 2), (4, 2), (5, 3)].iter().map(|&(x, y)| my_point(x, y)).collect();
    TestCase {
        args: vec![my_point(5, 3), vector(vec![])],
        expect_return: None,
        expect_param_states: BTreeMap::from([(1, vector(expected))]),
    }
}

fn draw_line_query() -> ReuseQuery {
    let classes = my_point_env();
    let env = corpus().env.merged(&classes).unwrap();
    ReuseQuery {
        signature: parse_signature("void drawLine(MyPoint pt, Vector<MyPoint> res)", &env).unwrap(),
        description: "Draw a line between the origin and specified point using Bresenham's algorithm".into(),
        tests: vec![draw_line_test()],
        classes,
    }
}

fn env() -> TypeEnv {
    corpus().env.merged(&my_point_env()).unwrap()
}

fn contains_source(conv: &Conversion, index: usize) -> bool {
    let mut set = Default::default();
    conv.collect_sources(&mut set);
    set.contains(&index)
}

#[test]
fn draw_line_end_to_end() {
    let corpus = corpus();
    let result = code_reuse(&draw_line_query(), &corpus, &standard_registry(), &ReuseConfig::default()).unwrap();
    let success = result.success().expect("drawLine should be synthesized");
    assert_eq!(success.adaptee_id, "geom.bresenham");
    assert!(success.report.passed());

    let view = success.alignment.sources_by_adapter();
    assert_eq!(view["pt"], vec!["x1", "y1"]);
    assert_eq!(view["res"], vec!["ret"]);

    let src = emit_pseudo_source(&success.plan, &env());
    assert!(src.contains("external.bresenham(0, 0, v1, v2)"), "{src}");
    assert!(src.contains("pt.getX()") && src.contains("pt.getY()"), "{src}");
    assert!(src.contains("for (Point"), "{src}");
    assert!(src.contains("new MyPoint("), "{src}");
    assert!(src.contains("res.add("), "{src}");

    // The plan re-verifies on a fresh run.
    assert!(run_tests(&success.plan, &draw_line_query().tests, &standard_registry(), &env()).passed());
    assert_eq!(result.candidates[0].entry_id, "geom.bresenham");
    assert_eq!(result.candidates[0].outcome, CandidateOutcome::Passed);
    assert_eq!(result.attempts.candidates, 1);
    assert!(result.attempts.alignments >= 2, "the cheapest alignment routes pt into x0/y0 and must be backtracked");
}

#[test]
fn draw_line_is_deterministic() {
    let corpus = corpus();
    let a = code_reuse(&draw_line_query(), &corpus, &standard_registry(), &ReuseConfig::default()).unwrap();
    let b = code_reuse(&draw_line_query(), &corpus, &standard_registry(), &ReuseConfig::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn draw_line_alignment_costs() {
    let env = env();
    let q = draw_line_query().signature;
    let corpus = corpus();
    let e = &corpus.get("geom.bresenham").unwrap().signature;
    let p = build_variables(&q, e, &env, DEFAULT_MAX_GROUP).unwrap();
    let best = solve_optimal(&p).unwrap();
    // MyPoint vs [int, int] is 1/9; Point[] vs Vector<MyPoint> differ in
    // {Point, Array} against {Vector, MyPoint}, 4 of 14 features.
    assert_eq!(best.cost, Cost::new(1, 9) + Cost::new(2, 7));
    let all = enumerate_alignments(&p, 50);
    assert!(all.windows(2).all(|w| w[0].cost <= w[1].cost));
    let x1y1 = all.iter().position(|a| a.sources_by_adapter()["pt"] == vec!["x1", "y1"]).unwrap();
    assert_eq!(all[x1y1].cost, best.cost);

    let refs = vec![corpus.get("geom.bresenham").unwrap()];
    let table = compute_type_distance_matrix(&q, &refs, &env, DEFAULT_MAX_GROUP).unwrap();
    let int = Type::int();
    assert_eq!(table.get_list(&Type::class("MyPoint"), &[int.clone(), int]).unwrap().value(), Cost::new(1, 9));
}

fn draw_line_plan(swap: bool) -> AdapterPlan {
    let env = env();
    let q = draw_line_query().signature;
    let corpus = corpus();
    let entry = corpus.get("geom.bresenham").unwrap();
    let p = build_variables(&q, &entry.signature, &env, DEFAULT_MAX_GROUP).unwrap();
    let all = enumerate_alignments(&p, 50);
    let alignment = all.iter().find(|a| a.sources_by_adapter()["pt"] == vec!["x1", "y1"]).unwrap();
    let mut plan = generate_adapter(alignment, &q, entry, &env, 0).unwrap();
    if swap {
        plan.arguments.swap(2, 3);
    }
    plan
}

#[test]
fn draw_line_plan_runs_and_swapped_plan_fails() {
    let env = env();
    let registry = standard_registry();
    let plan = draw_line_plan(false);
    assert!(matches!(plan.arguments[0], Conversion::Const { .. }));
    assert!(contains_source(&plan.arguments[2], 0));
    let out = eval_plan(&plan, &draw_line_test().args, &registry, &env).unwrap();
    assert_eq!(out.returned, None);
    assert_eq!(out.params[1].items().unwrap().len(), 6);
    // The caller's point is untouched.
    assert_eq!(out.params[0], my_point(5, 3));

    let swapped = draw_line_plan(true);
    let report = run_tests(&swapped, &[draw_line_test()], &registry, &env);
    assert!(!report.passed());
    // bresenham(0, 0, 3, 5) starts (0,0), (1,1), (1,2): the first difference is element 2.
    assert_eq!(report.results[0].mismatch.as_deref(), Some("param1[2].x"));
}

#[test]
fn degenerate_line_and_exact_match() {
    let env = env();
    let registry = standard_registry();
    let plan = draw_line_plan(false);
    let test = TestCase {
        args: vec![my_point(0, 0), vector(vec![])],
        expect_return: None,
        expect_param_states: BTreeMap::from([(1, vector(vec![my_point(0, 0)]))]),
    };
    assert!(run_tests(&plan, &[test], &registry, &env).passed());

    // A query with the adaptee's own signature reuses it directly.
    let corpus = corpus();
    let sig = corpus.get("text.anagram").unwrap().signature.clone();
    let query = ReuseQuery {
        signature: parse_signature("boolean sameLetters(String a, String b)", &corpus.env).unwrap(),
        description: "check whether two strings are anagrams".into(),
        tests: vec![TestCase {
            args: vec![Value::Str("listen".into()), Value::Str("silent".into())],
            expect_return: Some(Value::Bool(true)),
            expect_param_states: BTreeMap::new(),
        }],
        classes: TypeEnv::new(),
    };
    let result = code_reuse(&query, &corpus, &registry, &ReuseConfig::default()).unwrap();
    let success = result.success().unwrap();
    assert_eq!(success.alignment.cost, Cost::from_integer(0));
    assert!(success.plan.is_pass_through());
    assert_eq!(result.attempts.candidates, 1);
    assert_eq!(success.plan.adaptee, sig);
}

#[test]
fn unsatisfiable_tests_fail_after_trying() {
    let corpus = corpus();
    let mut query = draw_line_query();
    query.tests[0].expect_param_states.insert(1, vector(vec![my_point(9, 9)]));
    let result = code_reuse(&query, &corpus, &standard_registry(), &ReuseConfig::default()).unwrap();
    assert!(result.success().is_none());
    assert!(result.attempts.plans > 0);
    let bound = ReuseConfig::default();
    assert!(result.attempts.plans <= bound.top_k * bound.max_alignments * bound.max_plans);
}
