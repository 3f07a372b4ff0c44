use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use typereuse_core::align::{build_variables, enumerate_alignments};
use typereuse_core::distance::{delta, Cost};
use typereuse_core::featurize::psi;
use typereuse_core::runtime::{eval_plan, BuiltinRegistry, Value};
use typereuse_core::synth::{AdapterSynthesizer, ResultRouting};
use typereuse_core::typemodel::{
    Category, ClassDef, CorpusEntry, MethodSignature, Prim, RawCollection, Type, TypeEnv,
};

fn env() -> TypeEnv {
    let int = Type::int();
    TypeEnv::from_classes([
        ClassDef::new("Point", vec![("x".into(), int.clone()), ("y".into(), int.clone())], true, true).unwrap(),
        ClassDef::new("Node", vec![("key".into(), int), ("next".into(), Type::class("Node"))], true, true).unwrap(),
        ClassDef::new("Pair", vec![("a".into(), Type::Prim(Prim::Long)), ("b".into(), Type::Prim(Prim::Double))], true, true)
            .unwrap(),
    ])
    .unwrap()
}

fn arb_type() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![
        Just(Type::int()),
        Just(Type::Prim(Prim::Long)),
        Just(Type::Prim(Prim::Double)),
        Just(Type::Prim(Prim::Boolean)),
        Just(Type::Prim(Prim::String)),
        Just(Type::Prim(Prim::Char)),
        Just(Type::Prim(Prim::Short)),
        Just(Type::class("Point")),
        Just(Type::class("Node")),
        Just(Type::class("Pair")),
        Just(Type::TypeParam("E".into())),
        Just(Type::Wildcard),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Type::array_of),
            inner.clone().prop_map(|t| Type::collection(RawCollection::ArrayList, vec![t])),
            inner.clone().prop_map(|t| Type::collection(RawCollection::Vector, vec![t])),
            inner.clone().prop_map(|t| Type::collection(RawCollection::HashSet, vec![t])),
            (inner.clone(), inner).prop_map(|(k, v)| Type::collection(RawCollection::TreeMap, vec![k, v])),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn delta_is_symmetric_bounded_and_reflexive(a in arb_type(), b in arb_type()) {
        let env = env();
        let ab = delta(&a, &b, &env).unwrap();
        let ba = delta(&b, &a, &env).unwrap();
        prop_assert_eq!(ab.value(), ba.value());
        prop_assert!(ab.value() >= Cost::from_integer(0) && ab.value() <= Cost::from_integer(1));
        prop_assert!(delta(&a, &a, &env).unwrap().is_zero());
        prop_assert_eq!(ab.is_zero(), psi(&a, &env).unwrap() == psi(&b, &env).unwrap());
        let grown = psi(&Type::array_of(a.clone()), &env).unwrap().len();
        prop_assert_eq!(grown, psi(&a, &env).unwrap().len() + 2);
    }
}

/// Slot types the synthesizer can plan between, so plans exist often.
fn arb_slot_type() -> impl Strategy<Value = Type> {
    prop_oneof![
        Just(Type::int()),
        Just(Type::Prim(Prim::Long)),
        Just(Type::Prim(Prim::Double)),
        Just(Type::Prim(Prim::Boolean)),
        Just(Type::class("Point")),
        Just(Type::class("Pair")),
        Just(Type::array_of(Type::int())),
        Just(Type::collection(RawCollection::List, vec![Type::int()])),
        Just(Type::collection(RawCollection::Vector, vec![Type::Prim(Prim::Long)])),
        Just(Type::collection(RawCollection::Vector, vec![Type::class("Point")])),
        Just(Type::array_of(Type::class("Point"))),
    ]
}

fn arb_signature(name: &'static str, prefix: &'static str) -> impl Strategy<Value = MethodSignature> {
    (
        prop::collection::vec(arb_slot_type(), 0..4),
        prop_oneof![Just(Type::Void), arb_slot_type()],
    )
        .prop_map(move |(params, returns)| {
            let params = params.into_iter().enumerate().map(|(i, t)| (format!("{prefix}{}", i + 1), t)).collect();
            MethodSignature::new(name, params, returns).unwrap()
        })
}

/// A value inhabiting `ty`; references are non-null so getters succeed.
fn value_of(ty: &Type, env: &TypeEnv, rng: &mut ChaCha8Rng, depth: usize) -> Value {
    match ty {
        Type::Prim(p) => match p {
            Prim::Byte => Value::Byte(rng.gen()),
            Prim::Short => Value::Short(rng.gen()),
            Prim::Int => Value::Int(rng.gen_range(-50..50)),
            Prim::Long => Value::Long(rng.gen_range(-1_000_000_000_000..1_000_000_000_000)),
            Prim::Float => Value::Float(rng.gen_range(-1e3..1e3)),
            Prim::Double => Value::Double(rng.gen_range(-1e12..1e12)),
            Prim::Boolean => Value::Bool(rng.gen()),
            Prim::Char => Value::Char(rng.gen_range('a'..='z')),
            Prim::String => Value::Str((0..rng.gen_range(0..4)).map(|_| rng.gen_range('a'..='z')).collect()),
        },
        Type::Ref(_) if depth == 0 => Value::Null,
        Type::Ref(name) => {
            let class = env.get(name).unwrap();
            Value::Obj {
                class: name.clone(),
                fields: class.fields.iter().map(|(f, t)| (f.clone(), value_of(t, env, rng, depth - 1))).collect(),
            }
        }
        Type::Collection { raw, args } if raw.category() == Category::Map => {
            let n = rng.gen_range(0..3);
            let entries = (0..n).map(|_| (value_of(&args[0], env, rng, depth), value_of(&args[1], env, rng, depth)));
            let mut unique: Vec<(Value, Value)> = Vec::new();
            for (k, v) in entries {
                if !unique.iter().any(|(u, _)| *u == k) {
                    unique.push((k, v));
                }
            }
            Value::Map { key: args[0].clone(), value: args[1].clone(), entries: unique }
        }
        _ => {
            let elem = ty.element().cloned().unwrap_or(Type::int());
            let n = rng.gen_range(0..4);
            let items = (0..n).map(|_| value_of(&elem, env, rng, depth)).collect();
            Value::sequence_of(ty, items).unwrap()
        }
    }
}

fn fingerprint(args: &[Value]) -> u64 {
    args.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("|").bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)
    })
}

/// A builtin that returns a value of `returns` derived only from its inputs.
fn registry(returns: Type, env: TypeEnv) -> BuiltinRegistry {
    let mut r = BuiltinRegistry::new();
    r.register("synthetic", move |args| {
        if returns.is_void() {
            return Ok(None);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(fingerprint(args));
        Ok(Some(value_of(&returns, &env, &mut rng, 2)))
    });
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn plans_type_check_cover_inputs_and_run_deterministically(
        adapter in arb_signature("adapter", "r"),
        adaptee in arb_signature("adaptee", "e"),
        seed in any::<u64>(),
    ) {
        let env = env();
        let entry = CorpusEntry {
            id: "x".into(),
            signature: adaptee.clone(),
            doc: String::new(),
            class_refs: adaptee.referenced_classes().into_iter().collect(),
            builtin_key: "synthetic".into(),
            out_params: Default::default(),
            resolvable: true,
        };
        let registry = registry(adaptee.returns.clone(), env.clone());
        let problem = build_variables(&adapter, &adaptee, &env, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for alignment in enumerate_alignments(&problem, 4) {
            let Ok(synth) = AdapterSynthesizer::new(&alignment, &adapter, &entry, &env, 3, 20) else { continue };
            for i in 0..synth.available() {
                let plan = synth.plan(i).unwrap();
                prop_assert!(plan.check(&env).is_ok(), "{:?}", plan.check(&env));
                prop_assert_eq!(&plan, &synth.plan(i).unwrap());

                let args: Vec<Value> = adapter.params.iter().map(|(_, t)| value_of(t, &env, &mut rng, 2)).collect();
                let first = eval_plan(&plan, &args, &registry, &env);
                let second = eval_plan(&plan, &args, &registry, &env);
                prop_assert_eq!(&first, &second);
                if let Ok(out) = first {
                    let appended = match &plan.routing {
                        ResultRouting::AppendIntoParam { param, .. } => Some(*param),
                        _ => None,
                    };
                    for (j, (before, after)) in args.iter().zip(&out.params).enumerate() {
                        if Some(j) != appended {
                            prop_assert_eq!(before, after);
                        }
                    }
                    prop_assert_eq!(out.returned.is_some(), !adapter.returns.is_void());
                }
            }
        }
    }

    #[test]
    fn set_equality_ignores_order(xs in prop::collection::vec(-20i32..20, 0..12), seed in any::<u64>()) {
        let elem = Type::int();
        let items: Vec<Value> = xs.iter().copied().map(Value::Int).collect();
        let mut shuffled = items.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        let a = Value::set(elem.clone(), items.clone());
        let b = Value::set(elem.clone(), shuffled.clone());
        prop_assert_eq!(&a, &b);
        // Lists keep order sensitivity.
        let la = Value::Coll { category: Category::List, elem: elem.clone(), items };
        let lb = Value::Coll { category: Category::List, elem, items: shuffled };
        prop_assert_eq!(la == lb, la.items() == lb.items());
    }

    #[test]
    fn value_equality_is_an_equivalence(seed in any::<u64>(), ty in arb_slot_type()) {
        let env = env();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = value_of(&ty, &env, &mut rng, 2);
        let b = value_of(&ty, &env, &mut rng, 2);
        prop_assert_eq!(&a, &a.clone());
        prop_assert_eq!(a == b, b == a);
        prop_assert!(a.conforms(&ty, &env));
    }
}

#[test]
fn map_equality_is_by_key() {
    let m = |entries: Vec<(i32, i32)>| Value::Map {
        key: Type::int(),
        value: Type::int(),
        entries: entries.into_iter().map(|(k, v)| (Value::Int(k), Value::Int(v))).collect(),
    };
    assert_eq!(m(vec![(1, 2), (3, 4)]), m(vec![(3, 4), (1, 2)]));
    assert_ne!(m(vec![(1, 2), (3, 4)]), m(vec![(1, 4), (3, 2)]));
    assert_eq!(Value::Double(f64::NAN), Value::Double(-f64::NAN));
    assert_ne!(Value::Double(0.0), Value::Double(-0.0));
}
