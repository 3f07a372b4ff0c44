//! Multiset ("bag of features") representation of types.
//!
//! A type is represented by the primitive names, class names, collection
//! categories and attribute tags it is built from. Reference types are
//! unrolled exactly one level: inside a field list every nested reference
//! contributes only its class name, which keeps recursive classes finite.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::typemodel::{Category, Prim, Type, TypeEnv, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    Prim(Prim),
    Class(String),
    Category(Category),
    Array,
    Numeric,
    Collection,
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::Prim(p) => f.write_str(p.name()),
            Feature::Class(name) => f.write_str(name),
            Feature::Category(c) => f.write_str(c.name()),
            Feature::Array => f.write_str("Array"),
            Feature::Numeric => f.write_str("numeric"),
            Feature::Collection => f.write_str("collection"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FeatureMultiset {
    counts: BTreeMap<Feature, u32>,
}

impl FeatureMultiset {
    pub fn new() -> Self {
        FeatureMultiset::default()
    }

    pub fn add(&mut self, feature: Feature, times: u32) {
        if times > 0 {
            *self.counts.entry(feature).or_insert(0) += times;
        }
    }

    pub fn with(mut self, feature: Feature) -> Self {
        self.add(feature, 1);
        self
    }

    pub fn count(&self, feature: &Feature) -> u32 {
        self.counts.get(feature).copied().unwrap_or(0)
    }

    /// Total number of elements, multiplicities included.
    pub fn len(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Feature, u32> {
        self.counts.iter()
    }

    /// Additive multiset union.
    pub fn sum(&self, other: &FeatureMultiset) -> FeatureMultiset {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn extend(&mut self, other: &FeatureMultiset) {
        for (feature, &n) in &other.counts {
            self.add(feature.clone(), n);
        }
    }

    /// Multiset difference `self - other` (multiplicities floor at zero).
    pub fn difference(&self, other: &FeatureMultiset) -> FeatureMultiset {
        let mut out = FeatureMultiset::new();
        for (feature, &n) in &self.counts {
            out.add(feature.clone(), n.saturating_sub(other.count(feature)));
        }
        out
    }

    /// Size of the symmetric difference: `Σ |a(f) - b(f)|`.
    pub fn symmetric_difference_size(&self, other: &FeatureMultiset) -> u32 {
        self.difference(other).len() + other.difference(self).len()
    }

    /// `(token, count)` pairs sorted lexicographically by token text.
    pub fn sorted_tokens(&self) -> Vec<(String, u32)> {
        let mut tokens: Vec<(String, u32)> = self.counts.iter().map(|(f, &n)| (f.to_string(), n)).collect();
        tokens.sort();
        tokens
    }
}

impl FromIterator<Feature> for FeatureMultiset {
    fn from_iter<I: IntoIterator<Item = Feature>>(iter: I) -> Self {
        let mut out = FeatureMultiset::new();
        for feature in iter {
            out.add(feature, 1);
        }
        out
    }
}

/// Feature multiset of a single type, unrolling a top-level reference one
/// level through its fields.
pub fn psi(ty: &Type, env: &TypeEnv) -> Result<FeatureMultiset, TypeError> {
    let mut out = FeatureMultiset::new();
    collect(ty, env, true, &mut out)?;
    Ok(out)
}

/// Feature multiset of an ordered type list (class fields, or a group of
/// parameters treated as a list). References contribute only their name.
pub fn psi_field_list(types: &[Type], env: &TypeEnv) -> Result<FeatureMultiset, TypeError> {
    let mut out = FeatureMultiset::new();
    for ty in types {
        collect(ty, env, false, &mut out)?;
    }
    Ok(out)
}

fn collect(ty: &Type, env: &TypeEnv, unroll: bool, out: &mut FeatureMultiset) -> Result<(), TypeError> {
    match ty {
        Type::Prim(p) => {
            out.add(Feature::Prim(*p), 1);
            if p.is_numeric() {
                out.add(Feature::Numeric, 1);
            }
        }
        Type::Collection { raw, args } => {
            out.add(Feature::Category(raw.category()), 1);
            out.add(Feature::Collection, 1);
            for arg in args {
                collect(arg, env, unroll, out)?;
            }
        }
        Type::Array(elem) => {
            collect(elem, env, unroll, out)?;
            out.add(Feature::Array, 1);
            out.add(Feature::Collection, 1);
        }
        Type::Wildcard | Type::TypeParam(_) | Type::Void => {}
        Type::Ref(name) => {
            let class = env.class(name)?;
            out.add(Feature::Class(name.clone()), 1);
            if unroll {
                for (_, field) in &class.fields {
                    collect(field, env, false, out)?;
                }
            }
        }
    }
    Ok(())
}
