//! Interface alignment as a 0-1 integer linear program.
//!
//! An alignment maps the slots of an adaptee signature `E` onto the slots of
//! an adapter signature `R` such that every adapter slot is covered exactly
//! once, every adaptee slot is used at most once, and no mapping is
//! many-to-many. Each boolean variable stands for one admissible group
//! mapping (`e -> r1..rk` or `e1..ek -> r`) and carries the type distance of
//! that group as its objective coefficient.

mod brute;
mod encode;
mod solve;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::distance::{Cost, TypeDistance};
use crate::typemodel::{MethodSignature, ParamSlot};

pub use brute::{brute_force_alignments, BRUTE_FORCE_CAP};
pub use encode::{build_constraints, build_variables, build_variables_with, Constraint, ConstraintSystem, Relation};
pub use solve::{cost_of, enumerate_alignments, solve_optimal, Alignments};

/// Default cap on the size of a slot group inside one variable.
pub const DEFAULT_MAX_GROUP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("no feasible alignment")]
    Infeasible,
    #[error("{variables} variables exceed the brute-force cap of {cap}")]
    TooLarge { variables: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableKind {
    /// One adaptee slot feeding one or more adapter slots. A single adapter
    /// slot makes it a plain one-to-one pairing.
    OneToMany,
    /// Two or more adaptee slots merged into one adapter slot.
    ManyToOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignVariable {
    /// Position in [`AlignProblem::variables`].
    pub id: usize,
    pub kind: VariableKind,
    pub adaptee: Vec<ParamSlot>,
    pub adapter: Vec<ParamSlot>,
    pub distance: TypeDistance,
}

impl AlignVariable {
    pub fn cost(&self) -> Cost {
        self.distance.value()
    }

    pub fn is_one_to_one(&self) -> bool {
        self.adaptee.len() == 1 && self.adapter.len() == 1
    }

    /// `x_{e1,e2->r1}` style identifier.
    pub fn label(&self) -> String {
        alloc::format!("x_{{{}->{}}}", slot_list('e', &self.adaptee), slot_list('r', &self.adapter))
    }
}

impl fmt::Display for AlignVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn slot_list(prefix: char, slots: &[ParamSlot]) -> String {
    let mut out = String::new();
    for (i, slot) in slots.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push(prefix);
        out.push_str(&alloc::format!("{}", slot.index));
    }
    out
}

/// Position of a slot inside `sig.slots()`: inputs first, return last.
pub fn slot_position(slot: &ParamSlot, sig: &MethodSignature) -> usize {
    if slot.is_return() {
        sig.params.len()
    } else {
        slot.index - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignProblem {
    pub adapter: MethodSignature,
    pub adaptee: MethodSignature,
    pub adapter_slots: Vec<ParamSlot>,
    pub adaptee_slots: Vec<ParamSlot>,
    pub variables: Vec<AlignVariable>,
    /// For each adapter slot position, the ids of variables mentioning it.
    pub by_adapter: Vec<Vec<usize>>,
    /// For each adaptee slot position, the ids of variables mentioning it.
    pub by_adaptee: Vec<Vec<usize>>,
}

impl AlignProblem {
    pub fn variable_adapter_positions(&self, id: usize) -> Vec<usize> {
        self.variables[id].adapter.iter().map(|s| slot_position(s, &self.adapter)).collect()
    }

    pub fn variable_adaptee_positions(&self, id: usize) -> Vec<usize> {
        self.variables[id].adaptee.iter().map(|s| slot_position(s, &self.adaptee)).collect()
    }

    /// Deterministic order key among equal-cost alignments: for each adapter
    /// slot in order, the sorted adaptee ordinals of the variable covering it.
    pub fn tie_key(&self, chosen: &[usize]) -> Vec<Vec<usize>> {
        let mut key = alloc::vec![Vec::new(); self.adapter_slots.len()];
        for &id in chosen {
            let var = &self.variables[id];
            let mut ordinals: Vec<usize> = var.adaptee.iter().map(|s| s.index).collect();
            ordinals.sort_unstable();
            for pos in self.variable_adapter_positions(id) {
                key[pos] = ordinals.clone();
            }
        }
        key
    }

    /// Builds the alignment for a set of variable ids.
    pub fn alignment(&self, chosen: &[usize]) -> Alignment {
        let mut ids = chosen.to_vec();
        ids.sort_unstable();
        let cost = ids.iter().fold(Cost::from_integer(0), |acc, &id| acc + self.variables[id].cost());
        Alignment { variables: ids.iter().map(|&id| self.variables[id].clone()).collect(), ids, cost }
    }
}

/// A feasible assignment: the chosen variables and their total cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub ids: Vec<usize>,
    pub variables: Vec<AlignVariable>,
    pub cost: Cost,
}

impl Alignment {
    /// Every adaptee slot paired with the adapter slots it maps to (empty
    /// when the slot is left unmapped), in adaptee slot order.
    pub fn mapping_view(&self, adaptee_slots: &[ParamSlot]) -> Vec<(ParamSlot, Vec<ParamSlot>)> {
        adaptee_slots
            .iter()
            .map(|e| {
                let targets = self
                    .variables
                    .iter()
                    .find(|v| v.adaptee.contains(e))
                    .map(|v| v.adapter.clone())
                    .unwrap_or_default();
                (e.clone(), targets)
            })
            .collect()
    }

    /// Adapter slot name to the names of the adaptee slots covering it.
    pub fn sources_by_adapter(&self) -> BTreeMap<String, Vec<String>> {
        let mut out = BTreeMap::new();
        for v in &self.variables {
            for r in &v.adapter {
                out.insert(r.name.clone(), v.adaptee.iter().map(|e| e.name.clone()).collect());
            }
        }
        out
    }

    /// Compact rendering such as `(e1, e2) -> (r1), (e3) -> (r2)`, ordered
    /// by the first adapter slot each variable covers.
    pub fn describe(&self, problem: &AlignProblem) -> String {
        let mut vars: Vec<&AlignVariable> = self.variables.iter().collect();
        vars.sort_by_key(|v| v.adapter.iter().map(|s| slot_position(s, &problem.adapter)).min());
        let parts: Vec<String> = vars
            .iter()
            .map(|v| {
                let e: Vec<String> = v.adaptee.iter().map(|s| alloc::format!("e{}", s.index)).collect();
                let r: Vec<String> = v.adapter.iter().map(|s| alloc::format!("r{}", s.index)).collect();
                alloc::format!("({}) -> ({})", e.join(", "), r.join(", "))
            })
            .collect();
        parts.join(", ")
    }
}
