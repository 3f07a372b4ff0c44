use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{slot_position, AlignProblem, AlignVariable, VariableKind};
use crate::distance::DistanceTable;
use crate::typemodel::{MethodSignature, ParamSlot, TypeClass, TypeEnv, TypeError};

pub fn build_variables(
    adapter: &MethodSignature,
    adaptee: &MethodSignature,
    env: &TypeEnv,
    max_group: usize,
) -> Result<AlignProblem, TypeError> {
    build_variables_with(adapter, adaptee, env, max_group, &mut DistanceTable::new())
}

/// As [`build_variables`], reading and filling a shared distance table.
pub fn build_variables_with(
    adapter: &MethodSignature,
    adaptee: &MethodSignature,
    env: &TypeEnv,
    max_group: usize,
    table: &mut DistanceTable,
) -> Result<AlignProblem, TypeError> {
    let adapter_slots = adapter.slots();
    let adaptee_slots = adaptee.slots();
    let mut variables: Vec<AlignVariable> = Vec::new();
    let mut push = |kind, adaptee: Vec<ParamSlot>, adapter: Vec<ParamSlot>, distance| {
        let id = variables.len();
        variables.push(AlignVariable { id, kind, adaptee, adapter, distance });
    };

    for e in &adaptee_slots {
        for r in &adapter_slots {
            if pairable(e, r) {
                let d = table.delta(&e.ty, &r.ty, env)?;
                push(VariableKind::OneToMany, vec![e.clone()], vec![r.clone()], d);
            }
        }
    }
    for e in &adaptee_slots {
        if class_of(e) != Some(TypeClass::Reference) {
            continue;
        }
        let partners: Vec<&ParamSlot> = adapter_slots.iter().filter(|r| pairable(e, r)).collect();
        for group in subsets(partners.len(), max_group) {
            let rs: Vec<ParamSlot> = group.iter().map(|&i| partners[i].clone()).collect();
            let types: Vec<_> = rs.iter().map(|r| r.ty.clone()).collect();
            let d = table.delta_list(&e.ty, &types, env)?;
            push(VariableKind::OneToMany, vec![e.clone()], rs, d);
        }
    }
    for r in &adapter_slots {
        if class_of(r) != Some(TypeClass::Reference) {
            continue;
        }
        let partners: Vec<&ParamSlot> = adaptee_slots.iter().filter(|e| pairable(e, r)).collect();
        for group in subsets(partners.len(), max_group) {
            let es: Vec<ParamSlot> = group.iter().map(|&i| partners[i].clone()).collect();
            let types: Vec<_> = es.iter().map(|e| e.ty.clone()).collect();
            let d = table.delta_list(&r.ty, &types, env)?;
            push(VariableKind::ManyToOne, es, vec![r.clone()], d);
        }
    }

    let mut by_adapter = vec![Vec::new(); adapter_slots.len()];
    let mut by_adaptee = vec![Vec::new(); adaptee_slots.len()];
    for v in &variables {
        for r in &v.adapter {
            by_adapter[slot_position(r, adapter)].push(v.id);
        }
        for e in &v.adaptee {
            by_adaptee[slot_position(e, adaptee)].push(v.id);
        }
    }
    Ok(AlignProblem {
        adapter: adapter.clone(),
        adaptee: adaptee.clone(),
        adapter_slots,
        adaptee_slots,
        variables,
        by_adapter,
        by_adaptee,
    })
}

/// Unclassifiable slots (type parameters, wildcards) pair with nothing.
fn class_of(slot: &ParamSlot) -> Option<TypeClass> {
    slot.ty.type_class().ok()
}

/// Type-class compatibility plus the dataflow direction rule: the adaptee
/// result may only feed the adapter result or a collection/reference
/// adapter input, and the adapter result may only come from the adaptee
/// result.
fn pairable(e: &ParamSlot, r: &ParamSlot) -> bool {
    let (Some(ce), Some(cr)) = (class_of(e), class_of(r)) else {
        return false;
    };
    if !ce.compatible(cr) {
        return false;
    }
    match (e.is_return(), r.is_return()) {
        (true, true) => true,
        (true, false) => matches!(cr, TypeClass::Collection | TypeClass::Reference),
        (false, true) => false,
        (false, false) => true,
    }
}

/// Index subsets of size 2..=max_group, by size then lexicographically.
fn subsets(n: usize, max_group: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 2..=max_group.min(n) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(combo.clone());
            let Some(i) = (0..size).rev().find(|&i| combo[i] < n - size + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
}

/// `Σ x_v (relation) 1` over the variables mentioning one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub slot: ParamSlot,
    pub adapter_side: bool,
    pub vars: Vec<usize>,
    pub relation: Relation,
}

impl Constraint {
    pub fn holds(&self, x: &[bool]) -> bool {
        let sum = self.vars.iter().filter(|&&v| x[v]).count();
        match self.relation {
            Relation::Eq => sum == 1,
            Relation::Le => sum <= 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub rows: Vec<Constraint>,
    labels: Vec<String>,
}

impl ConstraintSystem {
    pub fn is_satisfied(&self, x: &[bool]) -> bool {
        self.rows.iter().all(|row| row.holds(x))
    }

    pub fn equalities(&self) -> impl Iterator<Item = &Constraint> {
        self.rows.iter().filter(|r| r.relation == Relation::Eq)
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Constraint> {
        self.rows.iter().filter(|r| r.relation == Relation::Le)
    }

    /// One row rendered as `x_{..} + x_{..} = 1`.
    pub fn render(&self, row: &Constraint) -> String {
        let terms: Vec<&str> = row.vars.iter().map(|&v| self.labels[v].as_str()).collect();
        let lhs = if terms.is_empty() { String::from("0") } else { terms.join(" + ") };
        let op = match row.relation {
            Relation::Eq => "=",
            Relation::Le => "<=",
        };
        alloc::format!("{lhs} {op} 1")
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{}", self.render(row))?;
        }
        Ok(())
    }
}

/// Exactly one variable per adapter slot, at most one per adaptee slot.
pub fn build_constraints(p: &AlignProblem) -> ConstraintSystem {
    let mut rows = Vec::new();
    for (pos, slot) in p.adapter_slots.iter().enumerate() {
        rows.push(Constraint { slot: slot.clone(), adapter_side: true, vars: p.by_adapter[pos].clone(), relation: Relation::Eq });
    }
    for (pos, slot) in p.adaptee_slots.iter().enumerate() {
        rows.push(Constraint { slot: slot.clone(), adapter_side: false, vars: p.by_adaptee[pos].clone(), relation: Relation::Le });
    }
    ConstraintSystem { rows, labels: p.variables.iter().map(AlignVariable::label).collect() }
}
