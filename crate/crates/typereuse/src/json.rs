//! JSON encodings for values, test cases, queries and reuse results.
//!
//! Values are tagged objects: `{"t":"int","v":5}`,
//! `{"t":"obj","class":"MyPoint","fields":{"x":...,"y":...}}`,
//! `{"t":"vec","elem":"MyPoint","items":[...]}`. Sequence tags are `array`,
//! `vec`, `list` and `set`; maps are `{"t":"map","key":K,"value":V,
//! "entries":[[k,v],...]}`. Non-finite floats are written as the strings
//! `"NaN"`, `"Infinity"` and `"-Infinity"`.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value as Json};
use typereuse_core::distance::cost_to_f64;
use typereuse_core::driver::{CandidateOutcome, ReuseOutcome, ReuseQuery, ReuseResult};
use typereuse_core::rank::RankStatus;
use typereuse_core::runtime::{TestCase, TestReport, Value};
use typereuse_core::synth::emit_pseudo_source;
use typereuse_core::typemodel::{
    parse_type, parse_type_syntactic, Category, ClassDef, ClassRecord, MethodSignature, Type, TypeEnv,
};

use crate::error::{Error, Result};

pub fn encode_value(v: &Value) -> Json {
    let seq = |tag: &str, elem: &Type, items: &[Value]| {
        json!({"t": tag, "elem": elem.to_string(), "items": items.iter().map(encode_value).collect::<Vec<_>>()})
    };
    match v {
        Value::Byte(x) => json!({"t": "byte", "v": x}),
        Value::Short(x) => json!({"t": "short", "v": x}),
        Value::Int(x) => json!({"t": "int", "v": x}),
        Value::Long(x) => json!({"t": "long", "v": x}),
        Value::Float(x) => json!({"t": "float", "v": float(f64::from(*x))}),
        Value::Double(x) => json!({"t": "double", "v": float(*x)}),
        Value::Bool(x) => json!({"t": "bool", "v": x}),
        Value::Char(x) => json!({"t": "char", "v": x.to_string()}),
        Value::Str(x) => json!({"t": "string", "v": x}),
        Value::Null => json!({"t": "null"}),
        Value::Array { elem, items } => seq("array", elem, items),
        Value::Coll { category, elem, items } => seq(sequence_tag(*category), elem, items),
        Value::Map { key, value, entries } => json!({
            "t": "map",
            "key": key.to_string(),
            "value": value.to_string(),
            "entries": entries.iter().map(|(k, v)| json!([encode_value(k), encode_value(v)])).collect::<Vec<_>>(),
        }),
        Value::Obj { class, fields } => {
            let fields: Map<String, Json> = fields.iter().map(|(n, v)| (n.clone(), encode_value(v))).collect();
            json!({"t": "obj", "class": class, "fields": fields})
        }
    }
}

fn sequence_tag(category: Category) -> &'static str {
    match category {
        Category::Vector => "vec",
        Category::List => "list",
        Category::Set => "set",
        Category::Map => "map",
    }
}

fn float(x: f64) -> Json {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("NaN")
    } else if x > 0.0 {
        json!("Infinity")
    } else {
        json!("-Infinity")
    }
}

/// Decodes a tagged value. Object fields are put in the class's declared
/// order and must match it exactly.
pub fn decode_value(j: &Json, env: &TypeEnv) -> Result<Value> {
    let obj = j.as_object().ok_or_else(|| Error::format(format!("value must be an object, got {j}")))?;
    let tag = obj.get("t").and_then(Json::as_str).ok_or_else(|| Error::format(format!("value without tag: {j}")))?;
    let v = || obj.get("v").ok_or_else(|| Error::format(format!("`{tag}` value without `v`")));
    let int = |lo: i64, hi: i64| -> Result<i64> {
        v()?
            .as_i64()
            .filter(|x| (lo..=hi).contains(x))
            .ok_or_else(|| Error::format(format!("`{tag}` out of range: {j}")))
    };
    let ty = |key: &str| -> Result<Type> {
        let text = obj.get(key).and_then(Json::as_str).ok_or_else(|| Error::format(format!("`{tag}` needs `{key}`")))?;
        Ok(parse_type(text, env)?)
    };
    let items = || -> Result<Vec<Value>> {
        obj.get("items")
            .and_then(Json::as_array)
            .ok_or_else(|| Error::format(format!("`{tag}` needs `items`")))?
            .iter()
            .map(|x| decode_value(x, env))
            .collect()
    };
    let coll = |category: Category| -> Result<Value> {
        let elem = ty("elem")?;
        let items = items()?;
        Ok(match category {
            Category::Set => Value::set(elem, items),
            _ => Value::Coll { category, elem, items },
        })
    };
    Ok(match tag {
        "byte" => Value::Byte(int(i8::MIN.into(), i8::MAX.into())? as i8),
        "short" => Value::Short(int(i16::MIN.into(), i16::MAX.into())? as i16),
        "int" => Value::Int(int(i32::MIN.into(), i32::MAX.into())? as i32),
        "long" => Value::Long(int(i64::MIN, i64::MAX)?),
        "float" => Value::Float(decode_float(v()?)? as f32),
        "double" => Value::Double(decode_float(v()?)?),
        "bool" => Value::Bool(v()?.as_bool().ok_or_else(|| Error::format("`bool` needs true or false"))?),
        "char" => {
            let s = v()?.as_str().unwrap_or_default();
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Value::Char(c),
                _ => return Err(Error::format(format!("`char` needs a one-character string, got {s:?}"))),
            }
        }
        "string" => Value::Str(v()?.as_str().ok_or_else(|| Error::format("`string` needs a string"))?.into()),
        "null" => Value::Null,
        "array" => Value::Array { elem: ty("elem")?, items: items()? },
        "vec" => coll(Category::Vector)?,
        "list" => coll(Category::List)?,
        "set" => coll(Category::Set)?,
        "map" => {
            let entries = obj
                .get("entries")
                .and_then(Json::as_array)
                .ok_or_else(|| Error::format("`map` needs `entries`"))?
                .iter()
                .map(|pair| match pair.as_array().map(Vec::as_slice) {
                    Some([k, v]) => Ok((decode_value(k, env)?, decode_value(v, env)?)),
                    _ => Err(Error::format("map entries are [key, value] pairs")),
                })
                .collect::<Result<Vec<_>>>()?;
            let mut keys = Vec::new();
            for (k, _) in &entries {
                if keys.contains(&k) {
                    return Err(Error::format(format!("duplicate map key {k}")));
                }
                keys.push(k);
            }
            Value::Map { key: ty("key")?, value: ty("value")?, entries }
        }
        "obj" => {
            let class = obj.get("class").and_then(Json::as_str).ok_or_else(|| Error::format("`obj` needs `class`"))?;
            let def = env.class(class)?;
            let given = obj.get("fields").and_then(Json::as_object).ok_or_else(|| Error::format("`obj` needs `fields`"))?;
            if given.len() != def.fields.len() || def.fields.iter().any(|(n, _)| !given.contains_key(n)) {
                return Err(Error::format(format!("fields of {class} must be exactly its declared fields")));
            }
            let fields = def
                .fields
                .iter()
                .map(|(n, _)| Ok((n.clone(), decode_value(&given[n], env)?)))
                .collect::<Result<Vec<_>>>()?;
            Value::Obj { class: class.into(), fields }
        }
        other => return Err(Error::format(format!("unknown value tag `{other}`"))),
    })
}

fn decode_float(j: &Json) -> Result<f64> {
    match j {
        Json::String(s) if s == "NaN" => Ok(f64::NAN),
        Json::String(s) if s == "Infinity" => Ok(f64::INFINITY),
        Json::String(s) if s == "-Infinity" => Ok(f64::NEG_INFINITY),
        other => other.as_f64().ok_or_else(|| Error::format(format!("not a number: {other}"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct TestRecord {
    args: Vec<Json>,
    #[serde(default)]
    expect_return: Option<Json>,
    #[serde(default)]
    expect_param_states: BTreeMap<usize, Json>,
}

fn decode_test(j: &Json, sig: &MethodSignature, env: &TypeEnv) -> Result<TestCase> {
    let record = TestRecord::deserialize(j)?;
    if record.args.len() != sig.params.len() {
        return Err(Error::format(format!(
            "test has {} arguments, {} expects {}",
            record.args.len(),
            sig.name,
            sig.params.len()
        )));
    }
    if record.expect_return.is_some() == sig.returns.is_void() {
        return Err(Error::format(format!("expectReturn must be given exactly when {} returns a value", sig.name)));
    }
    if let Some(i) = record.expect_param_states.keys().find(|&&i| i >= sig.params.len()) {
        return Err(Error::format(format!("expectParamStates index {i} out of range")));
    }
    Ok(TestCase {
        args: record.args.iter().map(|a| decode_value(a, env)).collect::<Result<_>>()?,
        expect_return: record.expect_return.as_ref().map(|r| decode_value(r, env)).transpose()?,
        expect_param_states: record
            .expect_param_states
            .iter()
            .map(|(&i, v)| Ok((i, decode_value(v, env)?)))
            .collect::<Result<_>>()?,
    })
}

/// Decodes a JSON array of test cases for `sig`.
pub fn decode_tests(j: &Json, sig: &MethodSignature, env: &TypeEnv) -> Result<Vec<TestCase>> {
    let tests = j.as_array().ok_or_else(|| Error::format("tests must be a JSON array"))?;
    tests.iter().map(|t| decode_test(t, sig, env)).collect()
}

pub fn encode_test(t: &TestCase) -> Json {
    let mut out = json!({"args": t.args.iter().map(encode_value).collect::<Vec<_>>()});
    if let Some(r) = &t.expect_return {
        out["expectReturn"] = encode_value(r);
    }
    if !t.expect_param_states.is_empty() {
        let states: Map<String, Json> =
            t.expect_param_states.iter().map(|(i, v)| (i.to_string(), encode_value(v))).collect();
        out["expectParamStates"] = Json::Object(states);
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryRecord {
    name: String,
    params: Vec<(String, String)>,
    returns: String,
    #[serde(default)]
    description: String,
    #[serde(default)]
    classes: Vec<ClassRecord>,
    #[serde(default)]
    tests: Option<Json>,
}

/// A decoded query file, together with the environment its types resolve in.
#[derive(Debug, Clone)]
pub struct LoadedQuery {
    pub query: ReuseQuery,
    pub env: TypeEnv,
}

/// Decodes a query file against the corpus environment. Tests come from the
/// file's own `tests` member unless `tests` is given.
pub fn decode_query(j: &Json, corpus_env: &TypeEnv, tests: Option<&Json>) -> Result<LoadedQuery> {
    let record = QueryRecord::deserialize(j)?;
    let mut local = Vec::new();
    for class in &record.classes {
        let fields = class
            .fields
            .iter()
            .map(|(n, t)| Ok((n.clone(), parse_type_syntactic(t)?)))
            .collect::<Result<Vec<_>>>()?;
        local.push(ClassDef::new(class.name.clone(), fields, class.constructible, class.gettable)?);
    }
    let classes = TypeEnv::from_classes(local)?;
    let env = corpus_env.merged(&classes)?;
    env.validate()?;
    let params = record
        .params
        .iter()
        .map(|(n, t)| Ok((n.clone(), parse_type(t, &env)?)))
        .collect::<Result<Vec<_>>>()?;
    let signature = MethodSignature::new(record.name, params, parse_type(&record.returns, &env)?)?;
    let tests = match (tests, &record.tests) {
        (Some(t), _) | (None, Some(t)) => decode_tests(t, &signature, &env)?,
        (None, None) => Vec::new(),
    };
    Ok(LoadedQuery { query: ReuseQuery { signature, description: record.description, tests, classes }, env })
}

pub fn encode_report(report: &TestReport) -> Json {
    json!({
        "passed": report.passed(),
        "tests": report.results.iter().map(|r| json!({
            "passed": r.passed,
            "mismatch": r.mismatch,
            "fault": r.fault.as_ref().map(ToString::to_string),
        })).collect::<Vec<_>>(),
    })
}

fn status_name(s: RankStatus) -> &'static str {
    match s {
        RankStatus::Feasible => "feasible",
        RankStatus::Infeasible => "infeasible",
        RankStatus::Unresolvable => "unresolvable",
    }
}

fn outcome_name(o: &CandidateOutcome) -> &'static str {
    match o {
        CandidateOutcome::Passed => "passed",
        CandidateOutcome::Exhausted => "exhausted",
        CandidateOutcome::Infeasible => "infeasible",
        CandidateOutcome::Unresolvable => "unresolvable",
        CandidateOutcome::NotVisited => "notVisited",
    }
}

pub fn encode_result(result: &ReuseResult, env: &TypeEnv) -> Json {
    let candidates: Vec<Json> = result
        .candidates
        .iter()
        .map(|c| {
            json!({
                "id": c.entry_id,
                "originalRank": c.rank.original_rank,
                "finalRank": c.rank.final_rank,
                "status": status_name(c.rank.status),
                "cost": c.rank.cost.map(|x| x.to_string()),
                "alignments": c.alignments,
                "plans": c.plans,
                "outcome": outcome_name(&c.outcome),
                "notes": c.notes,
            })
        })
        .collect();
    let attempts = json!({
        "candidates": result.attempts.candidates,
        "alignments": result.attempts.alignments,
        "plans": result.attempts.plans,
    });
    let mut out = json!({
        "outcome": if result.success().is_some() { "success" } else { "failure" },
        "attempts": attempts,
        "keywordRanking": result.keyword_ranking,
        "candidates": candidates,
    });
    if let ReuseOutcome::Success(s) = &result.outcome {
        let mapping: BTreeMap<String, Vec<String>> = s.alignment.sources_by_adapter();
        out["adaptee"] = json!(s.adaptee_id);
        out["alignment"] = json!({
            "cost": s.alignment.cost.to_string(),
            "costValue": cost_to_f64(&s.alignment.cost),
            "mapping": mapping,
            "index": s.alignment_index,
        });
        out["planIndex"] = json!(s.plan_index);
        out["plan"] = serde_json::to_value(&s.plan).expect("plans serialize");
        out["source"] = json!(emit_pseudo_source(&s.plan, env));
        out["report"] = encode_report(&s.report);
    }
    out
}

