use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::typemodel::{Category, Prim, Type, TypeEnv};

/// Dynamic value manipulated by plans and builtins.
///
/// Equality is structural and ignores the element-type annotations. Sets
/// compare without regard to order; maps compare by key set and per-key
/// value. Floating-point values compare by bit pattern (NaN equals NaN,
/// `0.0` differs from `-0.0`), which keeps equality an equivalence.
#[derive(Debug, Clone)]
pub enum Value {
    Byte(i8),
    Short(i16),
    Int(i32),
    Long(i64),
    Float(f32),
    Double(f64),
    Bool(bool),
    Char(char),
    Str(String),
    Null,
    Array { elem: Type, items: Vec<Value> },
    /// Vector, List or Set. Sets hold no duplicates.
    Coll { category: Category, elem: Type, items: Vec<Value> },
    Map { key: Type, value: Type, entries: Vec<(Value, Value)> },
    Obj { class: String, fields: Vec<(String, Value)> },
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        use Value::*;
        match (self, other) {
            (Byte(a), Byte(b)) => a == b,
            (Short(a), Short(b)) => a == b,
            (Int(a), Int(b)) => a == b,
            (Long(a), Long(b)) => a == b,
            (Float(a), Float(b)) => float_bits(f64::from(*a)) == float_bits(f64::from(*b)),
            (Double(a), Double(b)) => float_bits(*a) == float_bits(*b),
            (Bool(a), Bool(b)) => a == b,
            (Char(a), Char(b)) => a == b,
            (Str(a), Str(b)) => a == b,
            (Null, Null) => true,
            (Array { items: a, .. }, Array { items: b, .. }) => a == b,
            (Coll { category: ca, items: a, .. }, Coll { category: cb, items: b, .. }) => {
                ca == cb
                    && a.len() == b.len()
                    && if *ca == Category::Set { a.iter().all(|x| b.contains(x)) } else { a == b }
            }
            (Map { entries: a, .. }, Map { entries: b, .. }) => {
                a.len() == b.len() && a.iter().all(|(k, v)| b.iter().any(|(k2, v2)| k == k2 && v == v2))
            }
            (Obj { class: ca, fields: a }, Obj { class: cb, fields: b }) => ca == cb && a == b,
            _ => false,
        }
    }
}

fn float_bits(x: f64) -> u64 {
    if x.is_nan() {
        f64::NAN.to_bits()
    } else {
        x.to_bits()
    }
}

impl Value {
    pub fn obj(class: &str, fields: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
        Value::Obj { class: class.into(), fields: fields.into_iter().map(|(n, v)| (n.into(), v)).collect() }
    }

    pub fn set(elem: Type, items: Vec<Value>) -> Value {
        let mut unique: Vec<Value> = Vec::with_capacity(items.len());
        for item in items {
            if !unique.contains(&item) {
                unique.push(item);
            }
        }
        Value::Coll { category: Category::Set, elem, items: unique }
    }

    /// An empty value of a collection, array or map type.
    pub fn empty_of(ty: &Type) -> Option<Value> {
        match ty {
            Type::Array(elem) => Some(Value::Array { elem: (**elem).clone(), items: Vec::new() }),
            Type::Collection { raw, args } => {
                let arg = |i: usize| args.get(i).cloned().unwrap_or(Type::Wildcard);
                Some(match raw.category() {
                    Category::Map => Value::Map { key: arg(0), value: arg(1), entries: Vec::new() },
                    category => Value::Coll { category, elem: arg(0), items: Vec::new() },
                })
            }
            _ => None,
        }
    }

    /// Builds a sequence value of type `ty` (array or Vector/List/Set).
    pub fn sequence_of(ty: &Type, items: Vec<Value>) -> Option<Value> {
        match ty {
            Type::Array(elem) => Some(Value::Array { elem: (**elem).clone(), items }),
            Type::Collection { raw, args } if raw.category() != Category::Map => {
                let elem = args.first().cloned().unwrap_or(Type::Wildcard);
                Some(match raw.category() {
                    Category::Set => Value::set(elem, items),
                    category => Value::Coll { category, elem, items },
                })
            }
            _ => None,
        }
    }

    /// Elements of an array, Vector, List or Set.
    pub fn items(&self) -> Option<&[Value]> {
        match self {
            Value::Array { items, .. } | Value::Coll { items, .. } => Some(items),
            _ => None,
        }
    }

    pub fn field(&self, name: &str) -> Option<&Value> {
        match self {
            Value::Obj { fields, .. } => fields.iter().find(|(n, _)| n == name).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match *self {
            Value::Byte(v) => Some(v.into()),
            Value::Short(v) => Some(v.into()),
            Value::Int(v) => Some(v.into()),
            Value::Long(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Float(v) => Some(v.into()),
            Value::Double(v) => Some(v),
            _ => self.as_i64().map(|v| v as f64),
        }
    }

    pub fn prim(&self) -> Option<Prim> {
        Some(match self {
            Value::Byte(_) => Prim::Byte,
            Value::Short(_) => Prim::Short,
            Value::Int(_) => Prim::Int,
            Value::Long(_) => Prim::Long,
            Value::Float(_) => Prim::Float,
            Value::Double(_) => Prim::Double,
            Value::Bool(_) => Prim::Boolean,
            Value::Char(_) => Prim::Char,
            Value::Str(_) => Prim::String,
            _ => return None,
        })
    }

    /// Whether the value inhabits `ty`. Null inhabits reference and
    /// generic types; collections must match the category and their
    /// elements must conform.
    pub fn conforms(&self, ty: &Type, env: &TypeEnv) -> bool {
        match (self, ty) {
            (_, Type::Wildcard | Type::TypeParam(_)) => true,
            (_, Type::Void) => false,
            (Value::Null, Type::Ref(_)) => true,
            (v, Type::Prim(p)) => v.prim() == Some(*p),
            (Value::Array { items, .. }, Type::Array(elem)) => items.iter().all(|i| i.conforms(elem, env)),
            (Value::Coll { category, items, .. }, Type::Collection { raw, args }) => {
                *category == raw.category() && args.first().is_none_or(|a| items.iter().all(|i| i.conforms(a, env)))
            }
            (Value::Map { entries, .. }, Type::Collection { raw, args }) => {
                raw.category() == Category::Map
                    && (args.len() != 2 || entries.iter().all(|(k, v)| k.conforms(&args[0], env) && v.conforms(&args[1], env)))
            }
            (Value::Obj { class, fields }, Type::Ref(name)) => {
                class == name
                    && env.get(class).is_some_and(|def| {
                        def.fields.len() == fields.len()
                            && def.fields.iter().zip(fields).all(|((n, t), (m, v))| n == m && v.conforms(t, env))
                    })
            }
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, open: &str, items: &[Value], close: &str) -> fmt::Result {
            f.write_str(open)?;
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{item}")?;
            }
            f.write_str(close)
        }
        match self {
            Value::Byte(v) => write!(f, "{v}"),
            Value::Short(v) => write!(f, "{v}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Long(v) => write!(f, "{v}L"),
            Value::Float(v) => write!(f, "{v:?}f"),
            Value::Double(v) => write!(f, "{v:?}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Char(v) => write!(f, "{v:?}"),
            Value::Str(v) => write!(f, "{v:?}"),
            Value::Null => f.write_str("null"),
            Value::Array { items, .. } => list(f, "{", items, "}"),
            Value::Coll { items, .. } => list(f, "[", items, "]"),
            Value::Map { entries, .. } => {
                f.write_str("{")?;
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}={v}")?;
                }
                f.write_str("}")
            }
            Value::Obj { class, fields } => {
                write!(f, "{class}(")?;
                for (i, (n, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{n}={v}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Path of the first difference between `expected` and `actual`, e.g.
/// `[2].x`, or `None` when they are equal. The empty path means the values
/// differ at the top level.
pub fn first_mismatch(expected: &Value, actual: &Value) -> Option<String> {
    if expected == actual {
        return None;
    }
    match (expected, actual) {
        (Value::Array { items: a, .. }, Value::Array { items: b, .. })
        | (
            Value::Coll { category: Category::Vector | Category::List, items: a, .. },
            Value::Coll { category: Category::Vector | Category::List, items: b, .. },
        ) => {
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                if let Some(rest) = first_mismatch(x, y) {
                    return Some(alloc::format!("[{i}]{rest}"));
                }
            }
            Some(alloc::format!("[{}]", a.len().min(b.len())))
        }
        (Value::Obj { class: ca, fields: a }, Value::Obj { class: cb, fields: b }) if ca == cb => {
            for ((name, x), (_, y)) in a.iter().zip(b) {
                if let Some(rest) = first_mismatch(x, y) {
                    return Some(alloc::format!(".{name}{rest}"));
                }
            }
            Some(String::new())
        }
        _ => Some(String::new()),
    }
}
