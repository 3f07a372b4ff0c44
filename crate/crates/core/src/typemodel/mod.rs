//! Java-like type IR shared by every stage: primitive, collection, array,
//! reference and generic types, class definitions, method signatures and
//! the alignment slots derived from them.

mod corpus;
mod parse;

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use corpus::{ClassRecord, Corpus, CorpusBuilder, CorpusEntry, MethodRecord, DEFAULT_DEPENDENCY_CAP};
pub use parse::{parse_signature, parse_type, parse_type_syntactic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("syntax error in `{text}`: {reason}")]
    Syntax { text: String, reason: String },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown collection type `{0}`")]
    UnknownCollection(String),
    #[error("`{0}` is not a collection type")]
    NotACollection(String),
    #[error("type `{0}` has no primitive/collection/reference classification")]
    Unclassifiable(String),
    #[error("invalid class `{class}`: {reason}")]
    InvalidClass { class: String, reason: String },
    #[error("invalid signature `{name}`: {reason}")]
    InvalidSignature { name: String, reason: String },
}

/// Primitive types. `String` is treated as a primitive, boxed types are
/// folded onto their unboxed counterpart when parsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prim {
    Byte,
    Short,
    Int,
    Long,
    Float,
    Double,
    Boolean,
    Char,
    #[serde(rename = "String")]
    String,
}

impl Prim {
    pub const ALL: [Prim; 9] = [
        Prim::Byte,
        Prim::Short,
        Prim::Int,
        Prim::Long,
        Prim::Float,
        Prim::Double,
        Prim::Boolean,
        Prim::Char,
        Prim::String,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Prim::Byte => "byte",
            Prim::Short => "short",
            Prim::Int => "int",
            Prim::Long => "long",
            Prim::Float => "float",
            Prim::Double => "double",
            Prim::Boolean => "boolean",
            Prim::Char => "char",
            Prim::String => "String",
        }
    }

    /// Wrapper class name, used where a primitive appears as a type argument.
    pub fn boxed_name(self) -> &'static str {
        match self {
            Prim::Byte => "Byte",
            Prim::Short => "Short",
            Prim::Int => "Integer",
            Prim::Long => "Long",
            Prim::Float => "Float",
            Prim::Double => "Double",
            Prim::Boolean => "Boolean",
            Prim::Char => "Character",
            Prim::String => "String",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(
            self,
            Prim::Byte | Prim::Short | Prim::Int | Prim::Long | Prim::Float | Prim::Double
        )
    }

    pub fn is_integral(self) -> bool {
        matches!(self, Prim::Byte | Prim::Short | Prim::Int | Prim::Long)
    }

    /// Resolves both primitive spellings and their boxed class names.
    pub fn from_name(name: &str) -> Option<Prim> {
        Some(match name {
            "byte" | "Byte" => Prim::Byte,
            "short" | "Short" => Prim::Short,
            "int" | "Integer" => Prim::Int,
            "long" | "Long" => Prim::Long,
            "float" | "Float" => Prim::Float,
            "double" | "Double" => Prim::Double,
            "boolean" | "Boolean" => Prim::Boolean,
            "char" | "Character" => Prim::Char,
            "String" => Prim::String,
            _ => return None,
        })
    }
}

impl fmt::Display for Prim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The four canonical collection families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Vector,
    List,
    Set,
    Map,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Vector => "Vector",
            Category::List => "List",
            Category::Set => "Set",
            Category::Map => "Map",
        }
    }

    pub fn arity(self) -> usize {
        if self == Category::Map {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Built-in collection classes understood by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RawCollection {
    Vector,
    List,
    ArrayList,
    LinkedList,
    Set,
    HashSet,
    LinkedHashSet,
    TreeSet,
    EnumSet,
    Map,
    HashMap,
    LinkedHashMap,
    TreeMap,
    EnumMap,
}

impl RawCollection {
    pub const ALL: [RawCollection; 14] = [
        RawCollection::Vector,
        RawCollection::List,
        RawCollection::ArrayList,
        RawCollection::LinkedList,
        RawCollection::Set,
        RawCollection::HashSet,
        RawCollection::LinkedHashSet,
        RawCollection::TreeSet,
        RawCollection::EnumSet,
        RawCollection::Map,
        RawCollection::HashMap,
        RawCollection::LinkedHashMap,
        RawCollection::TreeMap,
        RawCollection::EnumMap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RawCollection::Vector => "Vector",
            RawCollection::List => "List",
            RawCollection::ArrayList => "ArrayList",
            RawCollection::LinkedList => "LinkedList",
            RawCollection::Set => "Set",
            RawCollection::HashSet => "HashSet",
            RawCollection::LinkedHashSet => "LinkedHashSet",
            RawCollection::TreeSet => "TreeSet",
            RawCollection::EnumSet => "EnumSet",
            RawCollection::Map => "Map",
            RawCollection::HashMap => "HashMap",
            RawCollection::LinkedHashMap => "LinkedHashMap",
            RawCollection::TreeMap => "TreeMap",
            RawCollection::EnumMap => "EnumMap",
        }
    }

    pub fn from_name(name: &str) -> Option<RawCollection> {
        RawCollection::ALL.into_iter().find(|raw| raw.name() == name)
    }

    pub fn category(self) -> Category {
        use RawCollection::*;
        match self {
            Vector => Category::Vector,
            List | ArrayList | LinkedList => Category::List,
            Set | HashSet | LinkedHashSet | TreeSet | EnumSet => Category::Set,
            Map | HashMap | LinkedHashMap | TreeMap | EnumMap => Category::Map,
        }
    }

    /// The raw class used when materialising a value of the given category.
    pub fn canonical(category: Category) -> RawCollection {
        match category {
            Category::Vector => RawCollection::Vector,
            Category::List => RawCollection::List,
            Category::Set => RawCollection::Set,
            Category::Map => RawCollection::Map,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Prim(Prim),
    /// `args` is empty for raw (unparameterised) collections.
    Collection { raw: RawCollection, args: Vec<Type> },
    Array(Box<Type>),
    Wildcard,
    TypeParam(String),
    Ref(String),
    Void,
}

impl Type {
    pub fn int() -> Type {
        Type::Prim(Prim::Int)
    }

    pub fn collection(raw: RawCollection, args: Vec<Type>) -> Type {
        Type::Collection { raw, args }
    }

    pub fn array_of(elem: Type) -> Type {
        Type::Array(Box::new(elem))
    }

    pub fn class(name: &str) -> Type {
        Type::Ref(name.to_owned())
    }

    pub fn is_void(&self) -> bool {
        matches!(self, Type::Void)
    }

    pub fn as_prim(&self) -> Option<Prim> {
        match self {
            Type::Prim(p) => Some(*p),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.as_prim().is_some_and(Prim::is_numeric)
    }

    /// Category of a collection type.
    pub fn category(&self) -> Result<Category, TypeError> {
        match self {
            Type::Collection { raw, .. } => Ok(raw.category()),
            other => Err(TypeError::NotACollection(other.to_string())),
        }
    }

    /// Coarse classification used by the alignment compatibility table.
    pub fn type_class(&self) -> Result<TypeClass, TypeError> {
        match self {
            Type::Prim(_) => Ok(TypeClass::Primitive),
            Type::Collection { .. } | Type::Array(_) => Ok(TypeClass::Collection),
            Type::Ref(_) => Ok(TypeClass::Reference),
            Type::Void | Type::Wildcard | Type::TypeParam(_) => {
                Err(TypeError::Unclassifiable(self.to_string()))
            }
        }
    }

    /// Element type of a sequence-like type (array, Vector, List, Set).
    /// Raw collections and maps have none.
    pub fn element(&self) -> Option<&Type> {
        match self {
            Type::Array(elem) => Some(elem),
            Type::Collection { raw, args } if raw.category() != Category::Map => args.first(),
            _ => None,
        }
    }

    /// Key and value types of a parameterised map.
    pub fn map_entry(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Collection { raw, args } if raw.category() == Category::Map && args.len() == 2 => {
                Some((&args[0], &args[1]))
            }
            _ => None,
        }
    }

    /// Structural form with every collection replaced by its category's
    /// canonical class; two types with equal normal forms share a runtime
    /// representation.
    pub fn normalized(&self) -> Type {
        match self {
            Type::Collection { raw, args } => Type::Collection {
                raw: RawCollection::canonical(raw.category()),
                args: args.iter().map(Type::normalized).collect(),
            },
            Type::Array(elem) => Type::Array(Box::new(elem.normalized())),
            other => other.clone(),
        }
    }

    pub fn same_shape(&self, other: &Type) -> bool {
        self.normalized() == other.normalized()
    }

    /// Names of every class referenced anywhere inside this type.
    pub fn referenced_classes(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Ref(name) => {
                out.insert(name.clone());
            }
            Type::Collection { args, .. } => args.iter().for_each(|arg| arg.referenced_classes(out)),
            Type::Array(elem) => elem.referenced_classes(out),
            _ => {}
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Prim(p) => f.write_str(p.name()),
            Type::Collection { raw, args } => {
                f.write_str(raw.name())?;
                if !args.is_empty() {
                    f.write_str("<")?;
                    for (i, arg) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        match arg {
                            Type::Prim(p) => f.write_str(p.boxed_name())?,
                            other => write!(f, "{other}")?,
                        }
                    }
                    f.write_str(">")?;
                }
                Ok(())
            }
            Type::Array(elem) => write!(f, "{elem}[]"),
            Type::Wildcard => f.write_str("?"),
            Type::TypeParam(name) | Type::Ref(name) => f.write_str(name),
            Type::Void => f.write_str("void"),
        }
    }
}

impl Serialize for Type {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Type {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_type_syntactic(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeClass {
    Primitive,
    Collection,
    Reference,
}

impl TypeClass {
    /// The primitive/collection/reference conversion table: collections only
    /// convert to collections, primitives and references interconvert.
    pub fn compatible(self, other: TypeClass) -> bool {
        use TypeClass::*;
        !matches!(
            (self, other),
            (Primitive, Collection) | (Collection, Primitive) | (Collection, Reference) | (Reference, Collection)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDef {
    pub name: String,
    pub fields: Vec<(String, Type)>,
    /// A constructor taking every field in declaration order exists.
    pub constructible: bool,
    /// A `get<Field>` accessor exists for every field.
    pub gettable: bool,
}

impl ClassDef {
    pub fn new(
        name: impl Into<String>,
        fields: Vec<(String, Type)>,
        constructible: bool,
        gettable: bool,
    ) -> Result<ClassDef, TypeError> {
        let name = name.into();
        let invalid = |reason: String| TypeError::InvalidClass { class: name.clone(), reason };
        let mut seen = BTreeSet::new();
        for (field, ty) in &fields {
            if !seen.insert(field.as_str()) {
                return Err(invalid(alloc::format!("duplicate field `{field}`")));
            }
            if matches!(ty, Type::Void | Type::Wildcard) {
                return Err(invalid(alloc::format!("field `{field}` has type {ty}")));
            }
        }
        Ok(ClassDef { name, fields, constructible, gettable })
    }

    pub fn field(&self, name: &str) -> Option<&Type> {
        self.fields.iter().find(|(f, _)| f == name).map(|(_, t)| t)
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|(f, _)| f == name)
    }
}

/// Accessor name for a field: `x` becomes `getX`.
pub fn getter_name(field: &str) -> String {
    let mut chars = field.chars();
    let mut out = String::from("get");
    if let Some(first) = chars.next() {
        out.extend(first.to_uppercase());
        out.push_str(chars.as_str());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSignature {
    pub name: String,
    pub params: Vec<(String, Type)>,
    pub returns: Type,
}

impl MethodSignature {
    pub fn new(
        name: impl Into<String>,
        params: Vec<(String, Type)>,
        returns: Type,
    ) -> Result<MethodSignature, TypeError> {
        let name = name.into();
        let invalid = |reason: String| TypeError::InvalidSignature { name: name.clone(), reason };
        let mut seen = BTreeSet::new();
        for (param, ty) in &params {
            if !seen.insert(param.as_str()) {
                return Err(invalid(alloc::format!("duplicate parameter `{param}`")));
            }
            if ty.is_void() {
                return Err(invalid(alloc::format!("parameter `{param}` is void")));
            }
        }
        Ok(MethodSignature { name, params, returns })
    }

    /// Alignment slots: inputs in declaration order, then the return slot
    /// when the method is not void.
    pub fn slots(&self) -> Vec<ParamSlot> {
        let mut slots: Vec<ParamSlot> = self
            .params
            .iter()
            .enumerate()
            .map(|(i, (name, ty))| ParamSlot {
                kind: SlotKind::Input,
                index: i + 1,
                name: name.clone(),
                ty: ty.clone(),
            })
            .collect();
        if !self.returns.is_void() {
            slots.push(ParamSlot {
                kind: SlotKind::Return,
                index: 0,
                name: RETURN_SLOT_NAME.to_owned(),
                ty: self.returns.clone(),
            });
        }
        slots
    }

    pub fn referenced_classes(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (_, ty) in &self.params {
            ty.referenced_classes(&mut out);
        }
        self.returns.referenced_classes(&mut out);
        out
    }
}

impl fmt::Display for MethodSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}(", self.returns, self.name)?;
        for (i, (name, ty)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{ty} {name}")?;
        }
        f.write_str(")")
    }
}

pub const RETURN_SLOT_NAME: &str = "ret";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SlotKind {
    Input,
    Return,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSlot {
    pub kind: SlotKind,
    /// 0 for the return slot, 1-based position for inputs.
    pub index: usize,
    pub name: String,
    pub ty: Type,
}

impl ParamSlot {
    pub fn is_return(&self) -> bool {
        self.kind == SlotKind::Return
    }
}

/// Class environment: every reference type is resolved here.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeEnv {
    classes: BTreeMap<String, ClassDef>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn from_classes(classes: impl IntoIterator<Item = ClassDef>) -> Result<TypeEnv, TypeError> {
        let mut env = TypeEnv::new();
        for class in classes {
            env.insert(class)?;
        }
        env.validate()?;
        Ok(env)
    }

    /// Adds a class. Re-declaring an identical class is a no-op; a
    /// conflicting redefinition is rejected.
    pub fn insert(&mut self, class: ClassDef) -> Result<(), TypeError> {
        match self.classes.get(&class.name) {
            Some(existing) if *existing == class => Ok(()),
            Some(_) => Err(TypeError::InvalidClass {
                class: class.name.clone(),
                reason: "conflicting redefinition".into(),
            }),
            None => {
                self.classes.insert(class.name.clone(), class);
                Ok(())
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&ClassDef> {
        self.classes.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.classes.contains_key(name)
    }

    pub fn class(&self, name: &str) -> Result<&ClassDef, TypeError> {
        self.get(name).ok_or_else(|| TypeError::UnknownClass(name.to_owned()))
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.values()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Checks that every reference reachable from a class field resolves.
    pub fn validate(&self) -> Result<(), TypeError> {
        for class in self.classes.values() {
            for (_, ty) in &class.fields {
                self.check_resolves(ty)?;
            }
        }
        Ok(())
    }

    pub fn check_resolves(&self, ty: &Type) -> Result<(), TypeError> {
        let mut names = BTreeSet::new();
        ty.referenced_classes(&mut names);
        match names.into_iter().find(|name| !self.contains(name)) {
            Some(missing) => Err(TypeError::UnknownClass(missing)),
            None => Ok(()),
        }
    }

    /// Union of two environments; classes present in both must agree.
    pub fn merged(&self, other: &TypeEnv) -> Result<TypeEnv, TypeError> {
        let mut env = self.clone();
        for class in other.classes.values() {
            env.insert(class.clone())?;
        }
        Ok(env)
    }

    /// Every class reachable from `roots` through field types, roots included.
    pub fn transitive_classes(&self, roots: &BTreeSet<String>) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<String> = roots.iter().cloned().collect();
        while let Some(name) = stack.pop() {
            if !seen.insert(name.clone()) {
                continue;
            }
            if let Some(class) = self.classes.get(&name) {
                let mut refs = BTreeSet::new();
                for (_, ty) in &class.fields {
                    ty.referenced_classes(&mut refs);
                }
                stack.extend(refs.into_iter().filter(|r| !seen.contains(r)));
            }
        }
        seen
    }
}
