//! Normalised type distance: the symmetric difference of two feature
//! multisets divided by their combined (additive) size.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::featurize::{psi, psi_field_list, FeatureMultiset};
use crate::typemodel::{Type, TypeEnv, TypeError};

/// Exact non-negative rational used for distances and alignment costs.
pub type Cost = Ratio<u64>;

/// Unreduced distance fraction `diff / total`, kept unreduced so that it
/// prints as the raw feature counts (e.g. `2/8`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TypeDistance {
    pub diff: u32,
    pub total: u32,
}

impl TypeDistance {
    pub const ZERO: TypeDistance = TypeDistance { diff: 0, total: 0 };

    pub fn between(a: &FeatureMultiset, b: &FeatureMultiset) -> TypeDistance {
        TypeDistance { diff: a.symmetric_difference_size(b), total: a.len() + b.len() }
    }

    /// Exact value; two empty multisets are at distance 0.
    pub fn value(&self) -> Cost {
        if self.total == 0 {
            Cost::from_integer(0)
        } else {
            Cost::new(u64::from(self.diff), u64::from(self.total))
        }
    }

    pub fn as_f64(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            f64::from(self.diff) / f64::from(self.total)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.diff == 0
    }
}

impl fmt::Display for TypeDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.diff, self.total)
    }
}

pub fn cost_to_f64(cost: &Cost) -> f64 {
    *cost.numer() as f64 / *cost.denom() as f64
}

pub fn delta(a: &Type, b: &Type, env: &TypeEnv) -> Result<TypeDistance, TypeError> {
    Ok(TypeDistance::between(&psi(a, env)?, &psi(b, env)?))
}

/// Distance between one type and a list of types featurised as a field list.
pub fn delta_list(single: &Type, many: &[Type], env: &TypeEnv) -> Result<TypeDistance, TypeError> {
    Ok(TypeDistance::between(&psi(single, env)?, &psi_field_list(many, env)?))
}

/// Memoised distance table over type pairs and (type, type-list) pairs.
/// Results never depend on the cache; it only avoids recomputation.
#[derive(Debug, Clone, Default)]
pub struct DistanceTable {
    pairs: BTreeMap<(Type, Type), TypeDistance>,
    lists: BTreeMap<(Type, Vec<Type>), TypeDistance>,
    hits: usize,
}

impl DistanceTable {
    pub fn new() -> Self {
        DistanceTable::default()
    }

    pub fn delta(&mut self, a: &Type, b: &Type, env: &TypeEnv) -> Result<TypeDistance, TypeError> {
        // delta is symmetric, so one entry serves both orders.
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(d) = self.pairs.get(&key) {
            self.hits += 1;
            return Ok(*d);
        }
        let d = delta(a, b, env)?;
        self.pairs.insert(key, d);
        Ok(d)
    }

    pub fn delta_list(&mut self, single: &Type, many: &[Type], env: &TypeEnv) -> Result<TypeDistance, TypeError> {
        let key = (single.clone(), many.to_vec());
        if let Some(d) = self.lists.get(&key) {
            self.hits += 1;
            return Ok(*d);
        }
        let d = delta_list(single, many, env)?;
        self.lists.insert(key, d);
        Ok(d)
    }

    /// Cached pairwise distance, if computed.
    pub fn get(&self, a: &Type, b: &Type) -> Option<TypeDistance> {
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        self.pairs.get(&key).copied()
    }

    pub fn get_list(&self, single: &Type, many: &[Type]) -> Option<TypeDistance> {
        self.lists.get(&(single.clone(), many.to_vec())).copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len() + self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hits(&self) -> usize {
        self.hits
    }
}
