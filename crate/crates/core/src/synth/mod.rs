//! Adapter synthesis: conversion planning between types, default constants
//! for unmapped adaptee inputs, result routing, and the executable
//! [`AdapterPlan`] IR.
//!
//! A [`Conversion`] is a small expression tree evaluated against a list of
//! source values. At the top level of an argument plan the sources are the
//! adapter's parameters; inside an element or entry conversion the single
//! source is the element (or key, or value) being converted.

mod adapter;
mod emit;
mod plan;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::typemodel::{Category, MethodSignature, Prim, RawCollection, Type, TypeEnv, TypeError};

pub use adapter::{generate_adapter, AdapterSynthesizer};
pub use emit::emit_pseudo_source;
pub use plan::{defaults_for, plan_conversion, DEFAULT_DEPTH, PLAN_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("no conversion from {from} to {to} within the depth limit")]
    NoConversion { from: String, to: String },
    #[error("plan index {index} out of range ({available} plans available)")]
    IndexExhausted { index: usize, available: usize },
    #[error("ill-typed plan: {0}")]
    IllTyped(String),
    #[error("adapter parameter `{0}` is never used")]
    UnusedParam(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

fn ill(msg: impl fmt::Display) -> SynthError {
    SynthError::IllTyped(alloc::format!("{msg}"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "lit", rename_all = "camelCase")]
pub enum Literal {
    /// byte, short, int or long.
    Integral { prim: Prim, value: i64 },
    /// float or double.
    Floating { prim: Prim, value: f64 },
    Bool { value: bool },
    Char { value: char },
    Str { value: String },
    /// `null` of a reference (or generic) type.
    Null { ty: Type },
    /// An empty collection or array.
    Empty { ty: Type },
}

impl Literal {
    pub fn ty(&self) -> Type {
        match self {
            Literal::Integral { prim, .. } | Literal::Floating { prim, .. } => Type::Prim(*prim),
            Literal::Bool { .. } => Type::Prim(Prim::Boolean),
            Literal::Char { .. } => Type::Prim(Prim::Char),
            Literal::Str { .. } => Type::Prim(Prim::String),
            Literal::Null { ty } | Literal::Empty { ty } => ty.clone(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Integral { prim: Prim::Long, value } => write!(f, "{value}L"),
            Literal::Integral { value, .. } => write!(f, "{value}"),
            Literal::Floating { prim: Prim::Float, value } => write!(f, "{value:?}f"),
            Literal::Floating { value, .. } => write!(f, "{value:?}"),
            Literal::Bool { value } => write!(f, "{value}"),
            Literal::Char { value } => write!(f, "{:?}", value),
            Literal::Str { value } => write!(f, "{:?}", value),
            Literal::Null { .. } => f.write_str("null"),
            Literal::Empty { ty: Type::Array(elem) } => write!(f, "new {elem}[0]"),
            Literal::Empty { ty } => write!(f, "new {}()", instantiable(ty)),
        }
    }
}

/// Concrete class used when a plan has to create a collection of type `ty`.
pub(crate) fn instantiable(ty: &Type) -> Type {
    match ty {
        Type::Collection { raw, args } => {
            let raw = match raw {
                RawCollection::List => RawCollection::ArrayList,
                RawCollection::Set => RawCollection::HashSet,
                RawCollection::Map => RawCollection::HashMap,
                other => *other,
            };
            Type::Collection { raw, args: args.clone() }
        }
        other => other.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Conversion {
    /// The `index`-th source value, unchanged.
    Source { index: usize },
    /// Java numeric cast.
    Cast { to: Prim, input: Box<Conversion> },
    /// Getter call `input.get<Field>()`.
    Get { class: String, field: String, input: Box<Conversion> },
    /// Constructor call taking every field in declaration order.
    Construct { class: String, args: Vec<Conversion> },
    /// Copies a sequence into a fresh collection or array of type `target`,
    /// converting each element with `element` (whose source 0 is the element).
    Elementwise { target: Type, input: Box<Conversion>, element: Box<Conversion> },
    /// Copies a map into a fresh map of type `target`, converting keys and
    /// values independently.
    MapEntrywise { target: Type, input: Box<Conversion>, key: Box<Conversion>, value: Box<Conversion> },
    Const { literal: Literal },
}

impl Conversion {
    pub fn source(index: usize) -> Conversion {
        Conversion::Source { index }
    }

    /// Number of non-source nodes, element conversions included.
    pub fn steps(&self) -> usize {
        match self {
            Conversion::Source { .. } => 0,
            Conversion::Const { .. } => 1,
            Conversion::Cast { input, .. } | Conversion::Get { input, .. } => 1 + input.steps(),
            Conversion::Construct { args, .. } => 1 + args.iter().map(Conversion::steps).sum::<usize>(),
            Conversion::Elementwise { input, element, .. } => 1 + input.steps() + element.steps(),
            Conversion::MapEntrywise { input, key, value, .. } => 1 + input.steps() + key.steps() + value.steps(),
        }
    }

    /// Nesting depth of non-source nodes.
    pub fn depth(&self) -> usize {
        match self {
            Conversion::Source { .. } => 0,
            Conversion::Const { .. } => 1,
            Conversion::Cast { input, .. } | Conversion::Get { input, .. } => 1 + input.depth(),
            Conversion::Construct { args, .. } => 1 + args.iter().map(Conversion::depth).max().unwrap_or(0),
            Conversion::Elementwise { input, element, .. } => 1 + input.depth().max(element.depth()),
            Conversion::MapEntrywise { input, key, value, .. } => 1 + input.depth().max(key.depth()).max(value.depth()),
        }
    }

    /// Indices of the sources this conversion reads at its own level (not
    /// inside element or entry conversions).
    pub fn collect_sources(&self, out: &mut BTreeSet<usize>) {
        match self {
            Conversion::Source { index } => {
                out.insert(*index);
            }
            Conversion::Const { .. } => {}
            Conversion::Cast { input, .. }
            | Conversion::Get { input, .. }
            | Conversion::Elementwise { input, .. }
            | Conversion::MapEntrywise { input, .. } => input.collect_sources(out),
            Conversion::Construct { args, .. } => args.iter().for_each(|a| a.collect_sources(out)),
        }
    }

    /// Static type of the conversion's result, given its source types.
    pub fn type_check(&self, sources: &[Type], env: &TypeEnv) -> Result<Type, SynthError> {
        match self {
            Conversion::Source { index } => {
                sources.get(*index).cloned().ok_or_else(|| ill(alloc::format!("source {index} out of range")))
            }
            Conversion::Const { literal } => Ok(literal.ty()),
            Conversion::Cast { to, input } => {
                let from = input.type_check(sources, env)?;
                if from.is_numeric() && to.is_numeric() {
                    Ok(Type::Prim(*to))
                } else {
                    Err(ill(alloc::format!("cast from {from} to {to}")))
                }
            }
            Conversion::Get { class, field, input } => {
                let from = input.type_check(sources, env)?;
                if from != Type::Ref(class.clone()) {
                    return Err(ill(alloc::format!("getter of {class} applied to {from}")));
                }
                let def = env.class(class)?;
                if !def.gettable {
                    return Err(ill(alloc::format!("{class} has no getters")));
                }
                def.field(field).cloned().ok_or_else(|| ill(alloc::format!("{class} has no field {field}")))
            }
            Conversion::Construct { class, args } => {
                let def = env.class(class)?;
                if !def.constructible || def.fields.len() != args.len() {
                    return Err(ill(alloc::format!("no matching constructor for {class}")));
                }
                for ((name, fty), arg) in def.fields.iter().zip(args) {
                    let got = arg.type_check(sources, env)?;
                    if !assignable(&got, fty) {
                        return Err(ill(alloc::format!("{class}.{name} expects {fty}, got {got}")));
                    }
                }
                Ok(Type::Ref(class.clone()))
            }
            Conversion::Elementwise { target, input, element } => {
                let from = input.type_check(sources, env)?;
                let (Some(fe), Some(te)) = (from.element(), target.element()) else {
                    return Err(ill(alloc::format!("elementwise copy from {from} to {target}")));
                };
                let got = element.type_check(core::slice::from_ref(fe), env)?;
                if !assignable(&got, te) {
                    return Err(ill(alloc::format!("element conversion yields {got}, expected {te}")));
                }
                Ok(target.clone())
            }
            Conversion::MapEntrywise { target, input, key, value } => {
                let from = input.type_check(sources, env)?;
                let (Some((fk, fv)), Some((tk, tv))) = (from.map_entry(), target.map_entry()) else {
                    return Err(ill(alloc::format!("entrywise copy from {from} to {target}")));
                };
                let gk = key.type_check(core::slice::from_ref(fk), env)?;
                let gv = value.type_check(core::slice::from_ref(fv), env)?;
                if !assignable(&gk, tk) || !assignable(&gv, tv) {
                    return Err(ill(alloc::format!("entry conversion yields ({gk}, {gv}), expected ({tk}, {tv})")));
                }
                Ok(target.clone())
            }
        }
    }
}

/// Values of type `from` can be used where `to` is expected without any
/// conversion: identical up to the concrete collection class.
pub fn assignable(from: &Type, to: &Type) -> bool {
    from.normalized() == to.normalized()
}

/// Whether a collection type can receive appended elements.
pub(crate) fn appendable(ty: &Type) -> bool {
    matches!(ty, Type::Collection { raw, args } if raw.category() != Category::Map && !args.is_empty())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ResultRouting {
    /// The adaptee's result (if any) is discarded.
    None,
    /// The adapter returns the converted adaptee result (source 0).
    ReturnConverted { plan: Conversion },
    /// Each element of the adaptee result is converted and appended to the
    /// adapter's collection parameter `param` (0-based).
    AppendIntoParam { param: usize, element: Conversion },
}

/// Executable description of one synthesized adapter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdapterPlan {
    pub adapter: MethodSignature,
    pub adaptee_id: String,
    pub adaptee: MethodSignature,
    pub builtin: String,
    /// 0-based adaptee parameter indices the adaptee mutates.
    pub out_params: BTreeSet<usize>,
    /// One conversion per adaptee input, sources = adapter parameters.
    pub arguments: Vec<Conversion>,
    pub routing: ResultRouting,
    pub temp_names: Vec<String>,
}

impl AdapterPlan {
    /// Static check: every conversion is well typed against the two
    /// signatures and every adapter parameter is used.
    pub fn check(&self, env: &TypeEnv) -> Result<(), SynthError> {
        let adapter_types: Vec<Type> = self.adapter.params.iter().map(|(_, t)| t.clone()).collect();
        if self.arguments.len() != self.adaptee.params.len() {
            return Err(ill("argument count differs from the adaptee's arity"));
        }
        let mut used = BTreeSet::new();
        for (arg, (name, expected)) in self.arguments.iter().zip(&self.adaptee.params) {
            let got = arg.type_check(&adapter_types, env)?;
            if !assignable(&got, expected) {
                return Err(ill(alloc::format!("argument {name} expects {expected}, got {got}")));
            }
            arg.collect_sources(&mut used);
        }
        match &self.routing {
            ResultRouting::None => {
                if !self.adapter.returns.is_void() {
                    return Err(ill("non-void adapter without a return value"));
                }
            }
            ResultRouting::ReturnConverted { plan } => {
                if self.adaptee.returns.is_void() {
                    return Err(ill("returning the result of a void adaptee"));
                }
                let got = plan.type_check(core::slice::from_ref(&self.adaptee.returns), env)?;
                if !assignable(&got, &self.adapter.returns) {
                    return Err(ill(alloc::format!("adapter returns {}, plan yields {got}", self.adapter.returns)));
                }
            }
            ResultRouting::AppendIntoParam { param, element } => {
                let target = adapter_types.get(*param).ok_or_else(|| ill("append target out of range"))?;
                let (Some(from), true) = (self.adaptee.returns.element(), appendable(target)) else {
                    return Err(ill(alloc::format!("cannot append {} into {target}", self.adaptee.returns)));
                };
                if !self.adapter.returns.is_void() {
                    return Err(ill("non-void adapter routing into a parameter"));
                }
                let got = element.type_check(core::slice::from_ref(from), env)?;
                let want = target.element().expect("appendable collections have an element type");
                if !assignable(&got, want) {
                    return Err(ill(alloc::format!("appended elements are {got}, expected {want}")));
                }
                used.insert(*param);
            }
        }
        for (i, (name, _)) in self.adapter.params.iter().enumerate() {
            if !used.contains(&i) {
                return Err(SynthError::UnusedParam(name.clone()));
            }
        }
        Ok(())
    }

    /// Adapter parameter indices written back after the call: adaptee
    /// out-parameters whose argument is an adapter parameter passed as is.
    pub fn write_backs(&self) -> Vec<(usize, usize)> {
        self.out_params
            .iter()
            .filter_map(|&slot| match self.arguments.get(slot) {
                Some(Conversion::Source { index }) => Some((slot, *index)),
                _ => None,
            })
            .collect()
    }

    pub fn is_pass_through(&self) -> bool {
        self.arguments.iter().enumerate().all(|(i, a)| *a == Conversion::source(i))
            && self.arguments.len() == self.adapter.params.len()
            && match &self.routing {
                ResultRouting::None => self.adaptee.returns.is_void(),
                ResultRouting::ReturnConverted { plan } => *plan == Conversion::source(0),
                ResultRouting::AppendIntoParam { .. } => false,
            }
    }
}
