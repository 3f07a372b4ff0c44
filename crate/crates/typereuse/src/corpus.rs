//! JSON Lines corpus files. Each non-blank line is `{"class": ...}` or
//! `{"method": ...}`; classes must appear before the methods that use them.

use std::path::Path;

use serde::Deserialize;
use typereuse_core::typemodel::{ClassRecord, Corpus, CorpusBuilder, MethodRecord};

use crate::error::{Error, Result};

/// The standard corpus shipped with the crate, backed by the standard
/// builtin registry.
pub const STANDARD_CORPUS: &str = include_str!("../data/std_corpus.jsonl");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Line {
    class: Option<ClassRecord>,
    method: Option<MethodRecord>,
}

pub fn parse_corpus(text: &str, dependency_cap: usize) -> Result<Corpus> {
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let parsed: Line = serde_json::from_str(raw).map_err(|e| Error::Schema { line, message: e.to_string() })?;
        match parsed {
            Line { class: Some(c), method: None } => records.push((line, Ok(c))),
            Line { class: None, method: Some(m) } => records.push((line, Err(m))),
            _ => {
                return Err(Error::Schema { line, message: "expected exactly one of `class` or `method`".into() });
            }
        }
    }

    let mut builder = CorpusBuilder::new(dependency_cap);
    for (_, record) in &records {
        if let Ok(class) = record {
            builder.declare(&class.name);
        }
    }
    for (line, record) in &records {
        let added = match record {
            Ok(class) => builder.add_class(class),
            Err(method) => builder.add_method(method),
        };
        added.map_err(|source| Error::CorpusType { line: *line, source })?;
    }
    Ok(builder.finish()?)
}

pub fn load_corpus(path: &Path, dependency_cap: usize) -> Result<Corpus> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    parse_corpus(&text, dependency_cap)
}

pub fn standard_corpus() -> Corpus {
    parse_corpus(STANDARD_CORPUS, typereuse_core::typemodel::DEFAULT_DEPENDENCY_CAP)
        .expect("the bundled corpus is valid")
}

/// `std` names the bundled corpus; anything else is a file path.
pub fn resolve_corpus(source: &str, dependency_cap: usize) -> Result<Corpus> {
    if source == "std" {
        return parse_corpus(STANDARD_CORPUS, dependency_cap);
    }
    load_corpus(Path::new(source), dependency_cap)
}
