use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::{MethodSignature, Prim, RawCollection, Type, TypeEnv, TypeError};

/// Decides whether a bare identifier names a class.
trait Resolver {
    fn is_class(&self, name: &str) -> bool;
    /// Unresolved identifiers that are not type parameters are errors.
    fn strict(&self) -> bool;
}

impl Resolver for TypeEnv {
    fn is_class(&self, name: &str) -> bool {
        self.contains(name)
    }

    fn strict(&self) -> bool {
        true
    }
}

struct Syntactic;

impl Resolver for Syntactic {
    fn is_class(&self, name: &str) -> bool {
        !is_type_param_name(name)
    }

    fn strict(&self) -> bool {
        false
    }
}

/// Type parameters are spelled as one capital letter with optional digits
/// (`E`, `K`, `T1`).
fn is_type_param_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_digit())
}

/// Parses a type expression, resolving bare identifiers against `env`.
pub fn parse_type(text: &str, env: &TypeEnv) -> Result<Type, TypeError> {
    Parser::new(text, env).parse_complete()
}

/// Parses a type expression without an environment: identifiers that do
/// not look like type parameters become references, unchecked.
pub fn parse_type_syntactic(text: &str) -> Result<Type, TypeError> {
    Parser::new(text, &Syntactic).parse_complete()
}

/// Parses `ReturnType name(Type a, Type b)`.
pub fn parse_signature(text: &str, env: &TypeEnv) -> Result<MethodSignature, TypeError> {
    let syntax = |reason: &str| TypeError::Syntax { text: text.to_owned(), reason: reason.to_owned() };
    let open = text.find('(').ok_or_else(|| syntax("missing `(`"))?;
    let close = text.rfind(')').ok_or_else(|| syntax("missing `)`"))?;
    if close < open || !text[close + 1..].trim().is_empty() {
        return Err(syntax("trailing text after parameter list"));
    }
    let (returns, name) = split_type_and_name(text[..open].trim()).ok_or_else(|| syntax("expected `Type name`"))?;
    let returns = parse_type(returns, env)?;

    let mut params = Vec::new();
    let inner = text[open + 1..close].trim();
    if !inner.is_empty() {
        for param in split_top_level(inner) {
            let (ty, pname) = split_type_and_name(param.trim()).ok_or_else(|| syntax("expected `Type name` parameter"))?;
            params.push((pname.to_owned(), parse_type(ty, env)?));
        }
    }
    MethodSignature::new(name, params, returns)
}

fn split_type_and_name(text: &str) -> Option<(&str, &str)> {
    let cut = text.rfind(|c: char| c.is_whitespace())?;
    let (ty, name) = (text[..cut].trim(), text[cut..].trim());
    let ident = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_alphanumeric() || c == '_');
    (ident && !ty.is_empty()).then_some((ty, name))
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '<' => depth += 1,
            '>' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

struct Parser<'a, R: ?Sized> {
    text: &'a str,
    pos: usize,
    resolver: &'a R,
}

impl<'a, R: Resolver + ?Sized> Parser<'a, R> {
    fn new(text: &'a str, resolver: &'a R) -> Self {
        Parser { text, pos: 0, resolver }
    }

    fn error(&self, reason: &str) -> TypeError {
        TypeError::Syntax { text: self.text.to_owned(), reason: reason.to_owned() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, expected: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.pos += expected.len_utf8();
            true
        } else {
            false
        }
    }

    fn parse_complete(mut self) -> Result<Type, TypeError> {
        let ty = self.parse_type()?;
        self.skip_ws();
        if self.pos != self.text.len() {
            return Err(self.error("unexpected trailing characters"));
        }
        Ok(ty)
    }

    fn parse_type(&mut self) -> Result<Type, TypeError> {
        let mut ty = self.parse_base()?;
        while self.eat('[') {
            if !self.eat(']') {
                return Err(self.error("expected `]`"));
            }
            if matches!(ty, Type::Void | Type::Wildcard) {
                return Err(self.error("array of void or wildcard"));
            }
            ty = Type::Array(Box::new(ty));
        }
        Ok(ty)
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_alphanumeric() || c == '_' || (i > 0 && c == '.')))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 || rest.starts_with(|c: char| c.is_ascii_digit()) {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn parse_base(&mut self) -> Result<Type, TypeError> {
        if self.eat('?') {
            return Ok(Type::Wildcard);
        }
        let name = self.ident().ok_or_else(|| self.error("expected a type name"))?;
        let has_args = self.eat('<');
        let args = if has_args { self.parse_args()? } else { Vec::new() };

        if let Some(raw) = RawCollection::from_name(name) {
            if has_args && args.len() != raw.category().arity() {
                return Err(self.error("wrong number of type arguments"));
            }
            if args.iter().any(Type::is_void) {
                return Err(self.error("void type argument"));
            }
            return Ok(Type::Collection { raw, args });
        }
        if has_args {
            return Err(TypeError::UnknownCollection(name.to_owned()));
        }
        if name == "void" {
            return Ok(Type::Void);
        }
        if let Some(prim) = Prim::from_name(name) {
            return Ok(Type::Prim(prim));
        }
        if self.resolver.is_class(name) {
            return Ok(Type::Ref(name.to_owned()));
        }
        if is_type_param_name(name) {
            return Ok(Type::TypeParam(name.to_owned()));
        }
        if self.resolver.strict() {
            Err(TypeError::UnknownClass(name.to_owned()))
        } else {
            Ok(Type::Ref(name.to_owned()))
        }
    }

    fn parse_args(&mut self) -> Result<Vec<Type>, TypeError> {
        let mut args = Vec::new();
        loop {
            args.push(self.parse_type()?);
            if self.eat(',') {
                continue;
            }
            if self.eat('>') {
                return Ok(args);
            }
            return Err(self.error("expected `,` or `>`"));
        }
    }
}

/// Used by the corpus loader: resolves identifiers against a set of
/// declared-but-not-yet-defined class names.
pub(crate) fn parse_type_with_names(
    text: &str,
    names: &alloc::collections::BTreeSet<String>,
) -> Result<Type, TypeError> {
    struct Names<'n>(&'n alloc::collections::BTreeSet<String>);
    impl Resolver for Names<'_> {
        fn is_class(&self, name: &str) -> bool {
            self.0.contains(name)
        }
        fn strict(&self) -> bool {
            true
        }
    }
    Parser::new(text, &Names(names)).parse_complete()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typemodel::{Category, ClassDef};
    use alloc::string::ToString;
    use alloc::vec;

    fn env() -> TypeEnv {
        let point = ClassDef::new("Point", vec![("x".into(), Type::int()), ("y".into(), Type::int())], true, true).unwrap();
        TypeEnv::from_classes([point]).unwrap()
    }

    #[test]
    fn boxed_types_normalize() {
        assert_eq!(parse_type("Integer", &env()), Ok(Type::int()));
        assert_eq!(parse_type("Double", &env()), Ok(Type::Prim(Prim::Double)));
        assert_eq!(parse_type("Character", &env()), Ok(Type::Prim(Prim::Char)));
    }

    #[test]
    fn keywords_and_structure() {
        let env = env();
        assert_eq!(parse_type("void", &env), Ok(Type::Void));
        assert_eq!(parse_type("?", &env), Ok(Type::Wildcard));
        assert_eq!(
            parse_type("Vector<Vector<Integer>>", &env),
            Ok(Type::collection(
                RawCollection::Vector,
                vec![Type::collection(RawCollection::Vector, vec![Type::int()])]
            ))
        );
        assert_eq!(
            parse_type("ArrayList<Integer>", &env),
            Ok(Type::collection(RawCollection::ArrayList, vec![Type::int()]))
        );
        assert_eq!(parse_type("int [ ] []", &env), Ok(Type::array_of(Type::array_of(Type::int()))));
        assert_eq!(parse_type("List<E>", &env), Ok(Type::collection(RawCollection::List, vec![Type::TypeParam("E".into())])));
        assert_eq!(parse_type("Map< String ,Point >", &env).unwrap().category(), Ok(Category::Map));
        assert_eq!(parse_type("List", &env), Ok(Type::collection(RawCollection::List, vec![])));
    }

    #[test]
    fn malformed_inputs() {
        let env = env();
        for bad in ["", "List<", "List<int", "int[", "Map<int>", "List<int, int>", "int int", "<int>", "List<void>", "void[]"] {
            assert!(matches!(parse_type(bad, &env), Err(TypeError::Syntax { .. })), "{bad}");
        }
        assert_eq!(parse_type("Frobnicator", &env), Err(TypeError::UnknownClass("Frobnicator".into())));
        assert_eq!(parse_type("Bag<int>", &env), Err(TypeError::UnknownCollection("Bag".into())));
    }

    #[test]
    fn syntactic_parse_accepts_unknown_classes() {
        assert_eq!(parse_type_syntactic("Frob[]"), Ok(Type::array_of(Type::class("Frob"))));
        assert_eq!(parse_type_syntactic("T"), Ok(Type::TypeParam("T".into())));
    }

    #[test]
    fn signatures() {
        let env = env();
        let sig = parse_signature("Map<String, Integer> count(List<String> words, int min)", &env).unwrap();
        assert_eq!(sig.name, "count");
        assert_eq!(sig.params.len(), 2);
        assert_eq!(sig.returns.to_string(), "Map<String, Integer>");
        assert!(parse_signature("void f(int)", &env).is_err());
        assert!(parse_signature("f(int a)", &env).is_err());
        assert!(parse_signature("void f(int a, void b)", &env).is_err());
        assert!(parse_signature("void f(Nope a)", &env).is_err());
    }
}
