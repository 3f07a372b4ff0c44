use serde_json::json;
use typereuse::bench::TASKS;
use typereuse::corpus::standard_corpus;
use typereuse::json::{decode_query, decode_tests, decode_value, encode_test, encode_value};
use typereuse_core::runtime::Value;
use typereuse_core::typemodel::{parse_signature, parse_type, Type, TypeEnv};

fn env() -> TypeEnv {
    standard_corpus().env
}

fn round_trip(v: &Value) {
    let back = decode_value(&encode_value(v), &env()).unwrap();
    assert_eq!(&back, v, "{}", encode_value(v));
}

#[test]
fn scalar_values_round_trip() {
    for v in [
        Value::Byte(-3),
        Value::Short(300),
        Value::Int(i32::MIN),
        Value::Long(i64::MAX),
        Value::Float(1.5),
        Value::Double(-0.0),
        Value::Double(f64::NAN),
        Value::Double(f64::INFINITY),
        Value::Float(f32::NEG_INFINITY),
        Value::Bool(true),
        Value::Char('\u{e9}'),
        Value::Str("a \"quoted\" string".into()),
        Value::Null,
    ] {
        round_trip(&v);
    }
    assert_eq!(encode_value(&Value::Double(f64::NAN)), json!({"t": "double", "v": "NaN"}));
}

#[test]
fn composite_values_round_trip() {
    let env = env();
    let point = |x, y| Value::obj("Point", [("x", Value::Int(x)), ("y", Value::Int(y))]);
    let ty = |s: &str| parse_type(s, &env).unwrap();
    round_trip(&Value::sequence_of(&ty("Point[]"), vec![point(1, 2), Value::Null]).unwrap());
    round_trip(&Value::sequence_of(&ty("Vector<Point>"), vec![point(0, 0)]).unwrap());
    round_trip(&Value::sequence_of(&ty("List<List<Integer>>"), vec![Value::sequence_of(&ty("List<Integer>"), vec![Value::Int(4)]).unwrap()]).unwrap());
    round_trip(&Value::set(Type::Prim(typereuse_core::typemodel::Prim::String), vec![Value::Str("a".into()), Value::Str("b".into())]));
    round_trip(&Value::Map {
        key: ty("String"),
        value: ty("int[]"),
        entries: vec![(Value::Str("k".into()), Value::sequence_of(&ty("int[]"), vec![Value::Int(1)]).unwrap())],
    });
}

#[test]
fn object_fields_follow_class_order() {
    let j = json!({"t": "obj", "class": "Point", "fields": {"y": {"t": "int", "v": 2}, "x": {"t": "int", "v": 1}}});
    let v = decode_value(&j, &env()).unwrap();
    assert_eq!(v, Value::obj("Point", [("x", Value::Int(1)), ("y", Value::Int(2))]));
    let missing = json!({"t": "obj", "class": "Point", "fields": {"x": {"t": "int", "v": 1}}});
    assert!(decode_value(&missing, &env()).is_err());
    assert!(decode_value(&json!({"t": "int", "v": 1.5}), &env()).is_err());
    assert!(decode_value(&json!({"t": "nope"}), &env()).is_err());
    assert!(decode_value(&json!({"t": "obj", "class": "Ghost", "fields": {}}), &env()).is_err());
}

#[test]
fn tests_are_validated_against_the_signature() {
    let env = env();
    let sig = parse_signature("int f(int a)", &env).unwrap();
    let ok = json!([{"args": [{"t": "int", "v": 1}], "expectReturn": {"t": "int", "v": 2}}]);
    let tests = decode_tests(&ok, &sig, &env).unwrap();
    assert_eq!(encode_test(&tests[0]), ok[0]);
    assert!(decode_tests(&json!([{"args": []}]), &sig, &env).is_err());
    assert!(decode_tests(&json!([{"args": [{"t": "int", "v": 1}]}]), &sig, &env).is_err());
    let void = parse_signature("void g(int a)", &env).unwrap();
    assert!(decode_tests(&ok, &void, &env).is_err());
    let bad_index = json!([{"args": [{"t": "int", "v": 1}], "expectParamStates": {"3": {"t": "int", "v": 1}}}]);
    assert!(decode_tests(&bad_index, &void, &env).is_err());
}

#[test]
fn bundled_task_files_decode() {
    let env = env();
    for task in &TASKS {
        let loaded = task.load(&env).unwrap_or_else(|e| panic!("{}: {e}", task.name));
        assert!(!loaded.query.tests.is_empty(), "{}", task.name);
        assert!(!loaded.query.description.is_empty(), "{}", task.name);
    }
    // A separate test document overrides inline tests.
    let query: serde_json::Value = serde_json::from_str(TASKS[0].source).unwrap();
    let only_first = json!([query["tests"][0].clone()]);
    let loaded = decode_query(&query, &env, Some(&only_first)).unwrap();
    assert_eq!(loaded.query.tests.len(), 1);
    assert!(loaded.env.contains("MyPoint") && loaded.query.classes.contains("MyPoint"));
}

#[test]
fn query_class_clashing_with_corpus_is_rejected() {
    let q = json!({
        "name": "f", "params": [["p", "Point"]], "returns": "void",
        "classes": [{"name": "Point", "fields": [["z", "double"]]}],
    });
    assert!(decode_query(&q, &env(), None).is_err());
}
