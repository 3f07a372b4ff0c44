//! Bounded template search for conversions between types.
//!
//! Templates: identity, numeric cast, getter, constructor, element-wise
//! copy between sequence shapes, entry-wise copy between maps. Results are
//! ordered by step count, then by how well getter and parameter names line
//! up with the fields they feed, then by field positions.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{assignable, Conversion, Literal, SynthError};
use crate::distance::{delta, Cost};
use crate::typemodel::{Prim, Type, TypeEnv};

/// Default nesting limit for conversion trees.
pub const DEFAULT_DEPTH: usize = 3;
/// Maximum number of alternatives returned for one conversion, and of
/// plans enumerated per alignment.
pub const PLAN_CAP: usize = 100;
/// Alternatives kept per constructor argument before taking products.
const ARG_OPTION_CAP: usize = 8;

/// Conversions from `sources` (indexed by position) to `target`.
///
/// With one source this is a plain type-to-type conversion. With several,
/// `target` must be a constructible class and every source must feed at
/// least one constructor argument.
pub fn plan_conversion(sources: &[Type], target: &Type, env: &TypeEnv, depth: usize) -> Result<Vec<Conversion>, SynthError> {
    let names: Vec<String> = (0..sources.len()).map(|i| alloc::format!("s{i}")).collect();
    Planner::new(env).plan(sources, &names, target, None, depth)
}

/// Constants tried for an adaptee input that no adapter slot maps to.
pub fn defaults_for(ty: &Type) -> Vec<Literal> {
    match ty {
        Type::Prim(p) => match p {
            Prim::Byte | Prim::Short | Prim::Int | Prim::Long => {
                vec![Literal::Integral { prim: *p, value: 0 }, Literal::Integral { prim: *p, value: 1 }]
            }
            Prim::Float | Prim::Double => {
                vec![Literal::Floating { prim: *p, value: 0.0 }, Literal::Floating { prim: *p, value: 1.0 }]
            }
            Prim::Boolean => vec![Literal::Bool { value: true }, Literal::Bool { value: false }],
            Prim::Char => vec![Literal::Char { value: '\0' }],
            Prim::String => vec![Literal::Str { value: String::new() }],
        },
        Type::Collection { .. } | Type::Array(_) => vec![Literal::Empty { ty: ty.clone() }],
        Type::Ref(_) | Type::TypeParam(_) | Type::Wildcard => vec![Literal::Null { ty: ty.clone() }],
        Type::Void => Vec::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Score {
    steps: usize,
    names: u32,
    positions: u32,
}

pub(crate) struct Planner<'e> {
    env: &'e TypeEnv,
}

impl<'e> Planner<'e> {
    pub(crate) fn new(env: &'e TypeEnv) -> Self {
        Planner { env }
    }

    /// Ordered, deduplicated, capped conversions. `hint` names the value
    /// being produced (e.g. the adaptee parameter), `names` the sources.
    pub(crate) fn plan(
        &self,
        sources: &[Type],
        names: &[String],
        target: &Type,
        hint: Option<&str>,
        depth: usize,
    ) -> Result<Vec<Conversion>, SynthError> {
        let no_conversion = || SynthError::NoConversion { from: describe(sources), to: target.to_string() };
        let plans = match sources {
            [] => return Err(no_conversion()),
            [only] => {
                let found = self.single(&Conversion::source(0), only, target, depth)?;
                self.rank(found, names, hint)
            }
            _ => self.construct_covering(sources, names, target, depth)?,
        };
        if plans.is_empty() {
            Err(no_conversion())
        } else {
            Ok(plans)
        }
    }

    fn rank(&self, found: Vec<Conversion>, names: &[String], hint: Option<&str>) -> Vec<Conversion> {
        let mut scored: Vec<(Score, Conversion)> = Vec::new();
        for conv in found {
            if scored.iter().any(|(_, c)| *c == conv) {
                continue;
            }
            let score = self.score(&conv, names, hint);
            scored.push((score, conv));
        }
        scored.sort_by_key(|(s, _)| *s);
        scored.truncate(PLAN_CAP);
        scored.into_iter().map(|(_, c)| c).collect()
    }

    /// Every conversion of `src` (of type `sty`) into `target`, unordered.
    fn single(&self, src: &Conversion, sty: &Type, target: &Type, depth: usize) -> Result<Vec<Conversion>, SynthError> {
        if assignable(sty, target) {
            return Ok(vec![src.clone()]);
        }
        let mut out = Vec::new();
        if depth == 0 {
            return Ok(out);
        }
        if let (Some(from), Some(to)) = (sty.as_prim(), target.as_prim()) {
            if from.is_numeric() && to.is_numeric() {
                out.push(Conversion::Cast { to, input: Box::new(src.clone()) });
            }
        }
        if let Type::Ref(class) = sty {
            let def = self.env.class(class)?;
            if def.gettable {
                for (field, fty) in &def.fields {
                    let get = Conversion::Get { class: class.clone(), field: field.clone(), input: Box::new(src.clone()) };
                    out.extend(self.single(&get, fty, target, depth - 1)?);
                }
            }
        }
        if let Type::Ref(class) = target {
            let def = self.env.class(class)?;
            if def.constructible && !def.fields.is_empty() {
                let mut per_field = Vec::new();
                for (_, fty) in &def.fields {
                    let mut options = self.rank(self.single(src, sty, fty, depth - 1)?, &[], None);
                    options.truncate(ARG_OPTION_CAP);
                    per_field.push(options);
                }
                for args in product(&per_field) {
                    out.push(Conversion::Construct { class: class.clone(), args });
                }
            }
        }
        if let (Some(se), Some(te)) = (sty.element(), target.element()) {
            let elements = self.rank(self.single(&Conversion::source(0), se, te, depth - 1)?, &[], None);
            for element in elements {
                out.push(Conversion::Elementwise {
                    target: target.clone(),
                    input: Box::new(src.clone()),
                    element: Box::new(element),
                });
            }
        }
        if let (Some((sk, sv)), Some((tk, tv))) = (sty.map_entry(), target.map_entry()) {
            let keys = self.rank(self.single(&Conversion::source(0), sk, tk, depth - 1)?, &[], None);
            let values = self.rank(self.single(&Conversion::source(0), sv, tv, depth - 1)?, &[], None);
            for key in &keys {
                for value in &values {
                    out.push(Conversion::MapEntrywise {
                        target: target.clone(),
                        input: Box::new(src.clone()),
                        key: Box::new(key.clone()),
                        value: Box::new(value.clone()),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Constructor calls for `target` drawing each argument from one source
    /// and using every source at least once. Ordered by the summed type
    /// distance between each source and the field it feeds, then by score.
    fn construct_covering(
        &self,
        sources: &[Type],
        names: &[String],
        target: &Type,
        depth: usize,
    ) -> Result<Vec<Conversion>, SynthError> {
        let Type::Ref(class) = target else {
            return Ok(Vec::new());
        };
        let def = self.env.class(class)?;
        if !def.constructible || def.fields.len() < sources.len() || depth == 0 {
            return Ok(Vec::new());
        }
        let mut per_field: Vec<Vec<(usize, Cost, Conversion)>> = Vec::new();
        for (_, fty) in &def.fields {
            let mut options = Vec::new();
            for (k, sty) in sources.iter().enumerate() {
                let d = delta(sty, fty, self.env)?.value();
                let found = self.single(&Conversion::source(k), sty, fty, depth - 1)?;
                let mut ranked = self.rank(found, names, None);
                ranked.truncate(ARG_OPTION_CAP);
                options.extend(ranked.into_iter().map(|c| (k, d, c)));
            }
            per_field.push(options);
        }
        let mut scored: Vec<((Cost, Score), Conversion)> = Vec::new();
        for choice in product(&per_field) {
            let mut used = vec![false; sources.len()];
            let mut cost = Cost::from_integer(0);
            let mut args = Vec::new();
            for (k, d, c) in choice {
                used[k] = true;
                cost += d;
                args.push(c);
            }
            if used.iter().all(|&u| u) {
                let conv = Conversion::Construct { class: class.clone(), args };
                let score = self.score(&conv, names, None);
                scored.push(((cost, score), conv));
            }
        }
        scored.sort_by_key(|s| s.0);
        scored.truncate(PLAN_CAP);
        Ok(scored.into_iter().map(|(_, c)| c).collect())
    }

    fn score(&self, conv: &Conversion, names: &[String], hint: Option<&str>) -> Score {
        let mut score = Score { steps: conv.steps(), names: 0, positions: 0 };
        if let Some(hint) = hint {
            if let Some((origin, _)) = origin(conv, names, self.env) {
                score.names += name_penalty(hint, &origin);
            }
        }
        self.score_inner(conv, names, &mut score);
        score
    }

    fn score_inner(&self, conv: &Conversion, names: &[String], score: &mut Score) {
        match conv {
            Conversion::Source { .. } | Conversion::Const { .. } => {}
            Conversion::Cast { input, .. } | Conversion::Get { input, .. } => self.score_inner(input, names, score),
            Conversion::Construct { class, args } => {
                if let Ok(def) = self.env.class(class) {
                    for (i, ((field, _), arg)) in def.fields.iter().zip(args).enumerate() {
                        match origin(arg, names, self.env) {
                            Some((name, pos)) => {
                                score.names += name_penalty(field, &name);
                                score.positions += u32::from(pos != i);
                            }
                            None => score.names += 1,
                        }
                    }
                }
                args.iter().for_each(|a| self.score_inner(a, names, score));
            }
            Conversion::Elementwise { input, element, .. } => {
                self.score_inner(input, names, score);
                self.score_inner(element, &[], score);
            }
            Conversion::MapEntrywise { input, key, value, .. } => {
                self.score_inner(input, names, score);
                self.score_inner(key, &[], score);
                self.score_inner(value, &[], score);
            }
        }
    }
}

/// Name and position a value visibly comes from: the outermost getter's
/// field, or a named source, looking through casts.
fn origin(conv: &Conversion, names: &[String], env: &TypeEnv) -> Option<(String, usize)> {
    match conv {
        Conversion::Cast { input, .. } => origin(input, names, env),
        Conversion::Get { class, field, .. } => {
            let pos = env.get(class).and_then(|c| c.field_index(field)).unwrap_or(usize::MAX);
            Some((field.clone(), pos))
        }
        Conversion::Source { index } => names.get(*index).map(|n| (n.clone(), *index)),
        _ => None,
    }
}

/// 0 for equal names, 1 when one is a prefix of the other (`x1` / `x`),
/// 2 otherwise. Case-insensitive.
fn name_penalty(a: &str, b: &str) -> u32 {
    let (a, b) = (a.to_lowercase(), b.to_lowercase());
    if a == b {
        0
    } else if a.starts_with(&b) || b.starts_with(&a) {
        1
    } else {
        2
    }
}

fn describe(types: &[Type]) -> String {
    let parts: Vec<String> = types.iter().map(Type::to_string).collect();
    parts.join(", ")
}

/// Cartesian product, first list varying slowest.
fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for item in list {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typemodel::{parse_type, ClassDef};

    fn env() -> TypeEnv {
        let p = |n: &str| ClassDef::new(n, vec![("x".into(), Type::int()), ("y".into(), Type::int())], true, true).unwrap();
        TypeEnv::from_classes([p("Point"), p("MyPoint")]).unwrap()
    }

    fn t(s: &str) -> Type {
        parse_type(s, &env()).unwrap()
    }

    fn get(field: &str, class: &str, index: usize) -> Conversion {
        Conversion::Get { class: class.into(), field: field.into(), input: Box::new(Conversion::source(index)) }
    }

    #[test]
    fn getters_from_a_point() {
        let plans = plan_conversion(&[t("MyPoint")], &t("int"), &env(), 3).unwrap();
        assert_eq!(plans, vec![get("x", "MyPoint", 0), get("y", "MyPoint", 0)]);
    }

    #[test]
    fn array_of_points_to_vector() {
        let plans = plan_conversion(&[t("Point[]")], &t("Vector<MyPoint>"), &env(), 3).unwrap();
        let expected = Conversion::Elementwise {
            target: t("Vector<MyPoint>"),
            input: Box::new(Conversion::source(0)),
            element: Box::new(Conversion::Construct {
                class: "MyPoint".into(),
                args: vec![get("x", "Point", 0), get("y", "Point", 0)],
            }),
        };
        assert_eq!(plans[0], expected);
        for p in &plans {
            assert_eq!(p.type_check(&[t("Point[]")], &env()).unwrap(), t("Vector<MyPoint>"));
            assert!(p.depth() <= 3);
        }
    }

    #[test]
    fn identity_and_impossible() {
        assert_eq!(plan_conversion(&[t("int")], &t("int"), &env(), 3).unwrap(), vec![Conversion::source(0)]);
        assert_eq!(
            plan_conversion(&[t("ArrayList<Integer>")], &t("List<Integer>"), &env(), 1).unwrap(),
            vec![Conversion::source(0)]
        );
        for depth in 1..=4 {
            assert!(matches!(
                plan_conversion(&[t("int")], &t("Set<Integer>"), &env(), depth),
                Err(SynthError::NoConversion { .. })
            ));
        }
        assert!(plan_conversion(&[t("String")], &t("int"), &env(), 3).is_err());
    }

    #[test]
    fn depth_limits_nesting() {
        assert!(plan_conversion(&[t("long[][]")], &t("List<List<Integer>>"), &env(), 2).is_err());
        let plans = plan_conversion(&[t("long[][]")], &t("List<List<Integer>>"), &env(), 3).unwrap();
        assert_eq!(plans.len(), 1);
        assert_eq!(plans[0].steps(), 3);
    }

    #[test]
    fn construct_from_several_sources_uses_all() {
        let plans = plan_conversion(&[t("int"), t("int")], &t("Point"), &env(), 3).unwrap();
        assert_eq!(plans.len(), 2);
        assert_eq!(
            plans[0],
            Conversion::Construct { class: "Point".into(), args: vec![Conversion::source(0), Conversion::source(1)] }
        );
    }

    #[test]
    fn defaults() {
        assert_eq!(
            defaults_for(&Type::int()),
            vec![Literal::Integral { prim: Prim::Int, value: 0 }, Literal::Integral { prim: Prim::Int, value: 1 }]
        );
        assert_eq!(defaults_for(&t("boolean")), vec![Literal::Bool { value: true }, Literal::Bool { value: false }]);
        assert_eq!(defaults_for(&t("Point")), vec![Literal::Null { ty: t("Point") }]);
        assert_eq!(defaults_for(&t("List<Integer>")), vec![Literal::Empty { ty: t("List<Integer>") }]);
    }
}
