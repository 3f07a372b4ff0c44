use alloc::string::ToString;
use alloc::vec::Vec;

use super::{BuiltinRegistry, RuntimeError, Value};
use crate::synth::{AdapterPlan, Conversion, Literal, ResultRouting};
use crate::typemodel::{Prim, TypeEnv};

/// Final state of one adapter invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub returned: Option<Value>,
    /// Adapter arguments after the call.
    pub params: Vec<Value>,
}

/// Runs an adapter plan on concrete arguments.
pub fn eval_plan(
    plan: &AdapterPlan,
    args: &[Value],
    registry: &BuiltinRegistry,
    env: &TypeEnv,
) -> Result<Outcome, RuntimeError> {
    if args.len() != plan.adapter.params.len() {
        return Err(RuntimeError::TypeFault(alloc::format!(
            "{} expects {} arguments, got {}",
            plan.adapter.name,
            plan.adapter.params.len(),
            args.len()
        )));
    }
    for (value, (name, ty)) in args.iter().zip(&plan.adapter.params) {
        if !value.conforms(ty, env) {
            return Err(RuntimeError::TypeFault(alloc::format!("argument {name} = {value} is not a {ty}")));
        }
    }
    let builtin = registry.get(&plan.builtin).ok_or_else(|| RuntimeError::MissingBuiltin(plan.builtin.clone()))?;

    let mut params = args.to_vec();
    let mut call_args = Vec::with_capacity(plan.arguments.len());
    for conv in &plan.arguments {
        call_args.push(eval_conversion(conv, &params, env)?);
    }
    let result = builtin(&mut call_args)?;
    for (slot, param) in plan.write_backs() {
        params[param] = call_args[slot].clone();
    }

    let returned = match &plan.routing {
        ResultRouting::None => None,
        ResultRouting::ReturnConverted { plan: conv } => {
            let value = result.ok_or_else(|| RuntimeError::TypeFault("adaptee returned nothing".into()))?;
            Some(eval_conversion(conv, core::slice::from_ref(&value), env)?)
        }
        ResultRouting::AppendIntoParam { param, element } => {
            let value = result.ok_or_else(|| RuntimeError::TypeFault("adaptee returned nothing".into()))?;
            let items = match &value {
                Value::Null => return Err(RuntimeError::NullDereference("adaptee result".into())),
                v => v.items().ok_or_else(|| RuntimeError::TypeFault(alloc::format!("{v} is not a sequence")))?,
            };
            let converted: Vec<Value> = items
                .iter()
                .map(|item| eval_conversion(element, core::slice::from_ref(item), env))
                .collect::<Result<_, _>>()?;
            append(&mut params[*param], converted)?;
            None
        }
    };
    Ok(Outcome { returned, params })
}

fn append(target: &mut Value, items: Vec<Value>) -> Result<(), RuntimeError> {
    match target {
        Value::Coll { category, items: existing, .. } => {
            for item in items {
                if *category != crate::typemodel::Category::Set || !existing.contains(&item) {
                    existing.push(item);
                }
            }
            Ok(())
        }
        Value::Null => Err(RuntimeError::NullDereference("append target".into())),
        other => Err(RuntimeError::TypeFault(alloc::format!("cannot append into {other}"))),
    }
}

/// Evaluates one conversion against its source values.
pub fn eval_conversion(conv: &Conversion, sources: &[Value], env: &TypeEnv) -> Result<Value, RuntimeError> {
    match conv {
        Conversion::Source { index } => sources
            .get(*index)
            .cloned()
            .ok_or_else(|| RuntimeError::TypeFault(alloc::format!("source {index} missing"))),
        Conversion::Const { literal } => literal_value(literal),
        Conversion::Cast { to, input } => {
            let v = eval_conversion(input, sources, env)?;
            cast(&v, *to).ok_or_else(|| RuntimeError::TypeFault(alloc::format!("cannot cast {v} to {to}")))
        }
        Conversion::Get { class, field, input } => match eval_conversion(input, sources, env)? {
            Value::Null => Err(RuntimeError::NullDereference(alloc::format!("{class}.{field}"))),
            Value::Obj { class: c, fields } if c == *class => fields
                .into_iter()
                .find(|(n, _)| n == field)
                .map(|(_, v)| v)
                .ok_or_else(|| RuntimeError::TypeFault(alloc::format!("{class} has no field {field}"))),
            other => Err(RuntimeError::TypeFault(alloc::format!("{other} is not a {class}"))),
        },
        Conversion::Construct { class, args } => {
            let def = env.class(class).map_err(|e| RuntimeError::TypeFault(e.to_string()))?;
            if def.fields.len() != args.len() {
                return Err(RuntimeError::TypeFault(alloc::format!("wrong arity for new {class}")));
            }
            let mut fields = Vec::with_capacity(args.len());
            for ((name, _), arg) in def.fields.iter().zip(args) {
                fields.push((name.clone(), eval_conversion(arg, sources, env)?));
            }
            Ok(Value::Obj { class: class.clone(), fields })
        }
        Conversion::Elementwise { target, input, element } => {
            let from = eval_conversion(input, sources, env)?;
            let items = match &from {
                Value::Null => return Err(RuntimeError::NullDereference("collection".into())),
                v => v.items().ok_or_else(|| RuntimeError::TypeFault(alloc::format!("{v} is not a sequence")))?,
            };
            let converted = items
                .iter()
                .map(|item| eval_conversion(element, core::slice::from_ref(item), env))
                .collect::<Result<Vec<_>, _>>()?;
            Value::sequence_of(target, converted)
                .ok_or_else(|| RuntimeError::TypeFault(alloc::format!("{target} is not a sequence type")))
        }
        Conversion::MapEntrywise { target, input, key, value } => {
            let entries = match eval_conversion(input, sources, env)? {
                Value::Map { entries, .. } => entries,
                Value::Null => return Err(RuntimeError::NullDereference("map".into())),
                other => return Err(RuntimeError::TypeFault(alloc::format!("{other} is not a map"))),
            };
            let Some(Value::Map { key: kt, value: vt, .. }) = Value::empty_of(target) else {
                return Err(RuntimeError::TypeFault(alloc::format!("{target} is not a map type")));
            };
            let mut out: Vec<(Value, Value)> = Vec::with_capacity(entries.len());
            for (k, v) in &entries {
                let k = eval_conversion(key, core::slice::from_ref(k), env)?;
                let v = eval_conversion(value, core::slice::from_ref(v), env)?;
                // Later entries win when converted keys collide, as with put().
                match out.iter_mut().find(|(existing, _)| *existing == k) {
                    Some(slot) => slot.1 = v,
                    None => out.push((k, v)),
                }
            }
            Ok(Value::Map { key: kt, value: vt, entries: out })
        }
    }
}

pub fn literal_value(literal: &Literal) -> Result<Value, RuntimeError> {
    Ok(match literal {
        Literal::Integral { prim, value } => {
            cast(&Value::Long(*value), *prim).ok_or_else(|| RuntimeError::TypeFault("bad integral literal".into()))?
        }
        Literal::Floating { prim, value } => {
            cast(&Value::Double(*value), *prim).ok_or_else(|| RuntimeError::TypeFault("bad floating literal".into()))?
        }
        Literal::Bool { value } => Value::Bool(*value),
        Literal::Char { value } => Value::Char(*value),
        Literal::Str { value } => Value::Str(value.clone()),
        Literal::Null { .. } => Value::Null,
        Literal::Empty { ty } => {
            Value::empty_of(ty).ok_or_else(|| RuntimeError::TypeFault(alloc::format!("no empty value of {ty}")))?
        }
    })
}

/// Java numeric conversion: integer narrowing wraps, floating to int/long
/// saturates (NaN becomes 0), floating to byte/short goes through int.
pub fn cast(v: &Value, to: Prim) -> Option<Value> {
    if !to.is_numeric() || !v.prim().is_some_and(Prim::is_numeric) {
        return None;
    }
    let integral = v.as_i64();
    let floating = v.as_f64()?;
    let whole = |x: f64| x as i32;
    Some(match to {
        Prim::Byte => Value::Byte(integral.map_or(whole(floating) as i8, |i| i as i8)),
        Prim::Short => Value::Short(integral.map_or(whole(floating) as i16, |i| i as i16)),
        Prim::Int => Value::Int(integral.map_or(whole(floating), |i| i as i32)),
        Prim::Long => Value::Long(integral.unwrap_or(floating as i64)),
        Prim::Float => Value::Float(match integral {
            Some(i) => i as f32,
            None => floating as f32,
        }),
        Prim::Double => Value::Double(match (integral, v) {
            (Some(i), _) => i as f64,
            (None, Value::Float(f)) => f64::from(*f),
            (None, _) => floating,
        }),
        _ => return None,
    })
}

