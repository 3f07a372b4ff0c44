//! Java-like rendering of adapter plans. Every intermediate value gets a
//! temporary `v1`, `v2`, ... in evaluation order; constants and parameters
//! are inlined.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{instantiable, AdapterPlan, Conversion, ResultRouting};
use crate::typemodel::{Type, TypeEnv};

pub fn emit_pseudo_source(plan: &AdapterPlan, env: &TypeEnv) -> String {
    render(plan, env).0
}

/// Source text and the temporaries it introduced.
pub(crate) fn render(plan: &AdapterPlan, env: &TypeEnv) -> (String, Vec<String>) {
    let mut w = Writer { env, lines: Vec::new(), indent: 1, temps: Vec::new() };
    let params: Vec<(String, Type)> = plan.adapter.params.clone();

    let args: Vec<String> = plan.arguments.iter().map(|a| w.expr(a, &params).0).collect();
    let call = alloc::format!("external.{}({})", plan.adaptee.name, args.join(", "));
    let returns = plan.adaptee.returns.clone();
    match &plan.routing {
        ResultRouting::ReturnConverted { plan: Conversion::Source { index: 0 } } => {
            w.line(alloc::format!("return {call};"));
        }
        ResultRouting::None => w.line(alloc::format!("{call};")),
        ResultRouting::ReturnConverted { plan: conv } => {
            let result = w.declare(&returns, &call);
            let (value, _) = w.expr(conv, &[(result, returns)]);
            w.line(alloc::format!("return {value};"));
        }
        ResultRouting::AppendIntoParam { param, element } => {
            let result = w.declare(&returns, &call);
            let target = plan.adapter.params[*param].0.clone();
            let elem_ty = returns.element().cloned().unwrap_or(Type::Wildcard);
            w.for_each(&elem_ty, &result, |w, item| {
                let (value, _) = w.expr(element, &[(item, elem_ty.clone())]);
                w.line(alloc::format!("{target}.add({value});"));
            });
        }
    }

    let mut out = alloc::format!("{} {{\n", plan.adapter);
    for line in &w.lines {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("}\n");
    (out, w.temps)
}

struct Writer<'e> {
    env: &'e TypeEnv,
    lines: Vec<String>,
    indent: usize,
    temps: Vec<String>,
}

impl Writer<'_> {
    fn line(&mut self, text: String) {
        let mut s = "    ".repeat(self.indent);
        s.push_str(&text);
        self.lines.push(s);
    }

    fn fresh(&mut self) -> String {
        let name = alloc::format!("v{}", self.temps.len() + 1);
        self.temps.push(name.clone());
        name
    }

    fn declare(&mut self, ty: &Type, init: &str) -> String {
        let name = self.fresh();
        self.line(alloc::format!("{ty} {name} = {init};"));
        name
    }

    fn for_each(&mut self, elem: &Type, over: &str, body: impl FnOnce(&mut Self, String)) {
        let item = self.fresh();
        self.line(alloc::format!("for ({elem} {item} : {over}) {{"));
        self.indent += 1;
        body(self, item);
        self.indent -= 1;
        self.line("}".to_string());
    }

    /// Emits the statements computing `conv` and returns the expression
    /// holding its value together with its type.
    fn expr(&mut self, conv: &Conversion, sources: &[(String, Type)]) -> (String, Type) {
        match conv {
            Conversion::Source { index } => sources[*index].clone(),
            Conversion::Const { literal } => (literal.to_string(), literal.ty()),
            Conversion::Cast { to, input } => {
                let (value, _) = self.expr(input, sources);
                let ty = Type::Prim(*to);
                (self.declare(&ty, &alloc::format!("({to}) {value}")), ty)
            }
            Conversion::Get { class, field, input } => {
                let (value, _) = self.expr(input, sources);
                let ty = self.env.get(class).and_then(|c| c.field(field)).cloned().unwrap_or(Type::Wildcard);
                let getter = crate::typemodel::getter_name(field);
                (self.declare(&ty, &alloc::format!("{value}.{getter}()")), ty)
            }
            Conversion::Construct { class, args } => {
                let values: Vec<String> = args.iter().map(|a| self.expr(a, sources).0).collect();
                let ty = Type::Ref(class.clone());
                (self.declare(&ty, &alloc::format!("new {class}({})", values.join(", "))), ty)
            }
            Conversion::Elementwise { target, input, element } => {
                let (from, from_ty) = self.expr(input, sources);
                let elem_ty = from_ty.element().cloned().unwrap_or(Type::Wildcard);
                let len = if matches!(from_ty, Type::Array(_)) { "length" } else { "size()" };
                match target {
                    Type::Array(to_elem) => {
                        let out = self.declare(target, &alloc::format!("new {to_elem}[{from}.{len}]"));
                        let counter = self.declare(&Type::int(), "0");
                        self.for_each(&elem_ty, &from, |w, item| {
                            let (value, _) = w.expr(element, &[(item, elem_ty.clone())]);
                            w.line(alloc::format!("{out}[{counter}++] = {value};"));
                        });
                        (out, target.clone())
                    }
                    _ => {
                        let out = self.declare(target, &alloc::format!("new {}()", instantiable(target)));
                        self.for_each(&elem_ty, &from, |w, item| {
                            let (value, _) = w.expr(element, &[(item, elem_ty.clone())]);
                            w.line(alloc::format!("{out}.add({value});"));
                        });
                        (out, target.clone())
                    }
                }
            }
            Conversion::MapEntrywise { target, input, key, value } => {
                let (from, from_ty) = self.expr(input, sources);
                let (k, v) = from_ty.map_entry().map(|(k, v)| (k.clone(), v.clone())).unwrap_or((Type::Wildcard, Type::Wildcard));
                let out = self.declare(target, &alloc::format!("new {}()", instantiable(target)));
                let entry = self.fresh();
                self.line(alloc::format!("for (Map.Entry<{k}, {v}> {entry} : {from}.entrySet()) {{"));
                self.indent += 1;
                let (kv, _) = self.expr(key, &[(alloc::format!("{entry}.getKey()"), k)]);
                let (vv, _) = self.expr(value, &[(alloc::format!("{entry}.getValue()"), v)]);
                self.line(alloc::format!("{out}.put({kv}, {vv});"));
                self.indent -= 1;
                self.line("}".to_string());
                (out, target.clone())
            }
        }
    }
}
