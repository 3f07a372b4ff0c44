use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::plan::{defaults_for, Planner, PLAN_CAP};
use super::{appendable, emit, AdapterPlan, Conversion, ResultRouting, SynthError};
use crate::align::{AlignVariable, Alignment};
use crate::typemodel::{CorpusEntry, MethodSignature, ParamSlot, SlotKind, TypeEnv, RETURN_SLOT_NAME};

/// The alternatives for one adaptee input, or for result routing.
#[derive(Debug, Clone)]
enum Unit {
    Argument(Vec<Conversion>),
    Routing(Vec<ResultRouting>),
}

impl Unit {
    fn len(&self) -> usize {
        match self {
            Unit::Argument(v) => v.len(),
            Unit::Routing(v) => v.len(),
        }
    }
}

/// Adapter plans for one alignment, enumerated in odometer order over the
/// per-slot alternatives (adaptee inputs in order, result routing last; the
/// last unit varies fastest).
#[derive(Debug, Clone)]
pub struct AdapterSynthesizer {
    adapter: MethodSignature,
    entry: CorpusEntry,
    units: Vec<Unit>,
    available: usize,
    env: TypeEnv,
}

impl AdapterSynthesizer {
    pub fn new(
        alignment: &Alignment,
        adapter: &MethodSignature,
        adaptee: &CorpusEntry,
        env: &TypeEnv,
        depth: usize,
        max_plans: usize,
    ) -> Result<Self, SynthError> {
        let planner = Planner::new(env);
        let sig = &adaptee.signature;
        let adapter_names: Vec<String> = adapter.params.iter().map(|(n, _)| n.clone()).collect();
        let mut units = Vec::new();

        for (i, (name, ty)) in sig.params.iter().enumerate() {
            let slot_index = i + 1;
            let var = covering(alignment, SlotKind::Input, slot_index);
            let options: Vec<Conversion> = match var {
                None => defaults_for(ty).into_iter().map(|literal| Conversion::Const { literal }).collect(),
                Some(v) => {
                    let positions: Vec<usize> = v.adapter.iter().map(|r| r.index - 1).collect();
                    let sources: Vec<_> = positions.iter().map(|&p| adapter.params[p].1.clone()).collect();
                    let names: Vec<String> = positions.iter().map(|&p| adapter_names[p].clone()).collect();
                    planner
                        .plan(&sources, &names, ty, Some(name), depth)?
                        .into_iter()
                        .map(|c| reindex(&c, &positions))
                        .collect()
                }
            };
            if options.is_empty() {
                return Err(SynthError::NoConversion { from: "nothing".into(), to: ty.to_string() });
            }
            units.push(Unit::Argument(options));
        }

        let routing = if sig.returns.is_void() {
            vec![ResultRouting::None]
        } else {
            match covering(alignment, SlotKind::Return, 0) {
                None => vec![ResultRouting::None],
                Some(v) if v.is_one_to_one() => route(&planner, sig, adapter, &v.adapter[0], depth)?,
                Some(v) => {
                    return Err(SynthError::NoConversion {
                        from: sig.returns.to_string(),
                        to: alloc::format!("{} adapter slots", v.adapter.len()),
                    })
                }
            }
        };
        units.push(Unit::Routing(routing));

        let available = units.iter().try_fold(1usize, |acc, u| acc.checked_mul(u.len())).unwrap_or(usize::MAX);
        Ok(AdapterSynthesizer {
            adapter: adapter.clone(),
            entry: adaptee.clone(),
            units,
            available: available.min(max_plans),
            env: env.clone(),
        })
    }

    /// Number of plans that [`AdapterSynthesizer::plan`] can produce.
    pub fn available(&self) -> usize {
        self.available
    }

    pub fn plan(&self, index: usize) -> Result<AdapterPlan, SynthError> {
        if index >= self.available {
            return Err(SynthError::IndexExhausted { index, available: self.available });
        }
        let mut digits = vec![0usize; self.units.len()];
        let mut rest = index;
        for (digit, unit) in digits.iter_mut().zip(&self.units).rev() {
            *digit = rest % unit.len();
            rest /= unit.len();
        }
        let mut arguments = Vec::new();
        let mut routing = ResultRouting::None;
        for (unit, &d) in self.units.iter().zip(&digits) {
            match unit {
                Unit::Argument(options) => arguments.push(options[d].clone()),
                Unit::Routing(options) => routing = options[d].clone(),
            }
        }
        let mut plan = AdapterPlan {
            adapter: self.adapter.clone(),
            adaptee_id: self.entry.id.clone(),
            adaptee: self.entry.signature.clone(),
            builtin: self.entry.builtin_key.clone(),
            out_params: self.entry.out_params.clone(),
            arguments,
            routing,
            temp_names: Vec::new(),
        };
        plan.temp_names = emit::render(&plan, &self.env).1;
        Ok(plan)
    }

    pub fn plans(&self) -> impl Iterator<Item = AdapterPlan> + '_ {
        (0..self.available).filter_map(move |i| self.plan(i).ok())
    }
}

/// The `plan_index`-th adapter plan for an alignment.
pub fn generate_adapter(
    alignment: &Alignment,
    adapter: &MethodSignature,
    adaptee: &CorpusEntry,
    env: &TypeEnv,
    plan_index: usize,
) -> Result<AdapterPlan, SynthError> {
    AdapterSynthesizer::new(alignment, adapter, adaptee, env, super::DEFAULT_DEPTH, PLAN_CAP)?.plan(plan_index)
}

fn covering(alignment: &Alignment, kind: SlotKind, index: usize) -> Option<&AlignVariable> {
    alignment.variables.iter().find(|v| v.adaptee.iter().any(|e| e.kind == kind && e.index == index))
}

fn route(
    planner: &Planner<'_>,
    adaptee: &MethodSignature,
    adapter: &MethodSignature,
    target: &ParamSlot,
    depth: usize,
) -> Result<Vec<ResultRouting>, SynthError> {
    let result = core::slice::from_ref(&adaptee.returns);
    let names = [String::from(RETURN_SLOT_NAME)];
    if target.is_return() {
        let plans = planner.plan(result, &names, &adapter.returns, None, depth)?;
        return Ok(plans.into_iter().map(|plan| ResultRouting::ReturnConverted { plan }).collect());
    }
    let no_conversion = || SynthError::NoConversion { from: adaptee.returns.to_string(), to: target.ty.to_string() };
    let (Some(from), true) = (adaptee.returns.element(), appendable(&target.ty)) else {
        return Err(no_conversion());
    };
    let to = target.ty.element().ok_or_else(no_conversion)?;
    let elements = planner.plan(core::slice::from_ref(from), &[], to, None, depth.saturating_sub(1))?;
    Ok(elements
        .into_iter()
        .map(|element| ResultRouting::AppendIntoParam { param: target.index - 1, element })
        .collect())
}

/// Rewrites local source indices (positions within a variable's adapter
/// group) into adapter parameter indices.
fn reindex(conv: &Conversion, positions: &[usize]) -> Conversion {
    use alloc::boxed::Box;
    let re = |c: &Conversion| Box::new(reindex(c, positions));
    match conv {
        Conversion::Source { index } => Conversion::Source { index: positions[*index] },
        Conversion::Const { .. } => conv.clone(),
        Conversion::Cast { to, input } => Conversion::Cast { to: *to, input: re(input) },
        Conversion::Get { class, field, input } => {
            Conversion::Get { class: class.clone(), field: field.clone(), input: re(input) }
        }
        Conversion::Construct { class, args } => {
            Conversion::Construct { class: class.clone(), args: args.iter().map(|a| reindex(a, positions)).collect() }
        }
        // Element and entry conversions have their own sources.
        Conversion::Elementwise { target, input, element } => {
            Conversion::Elementwise { target: target.clone(), input: re(input), element: element.clone() }
        }
        Conversion::MapEntrywise { target, input, key, value } => Conversion::MapEntrywise {
            target: target.clone(),
            input: re(input),
            key: key.clone(),
            value: value.clone(),
        },
    }
}
