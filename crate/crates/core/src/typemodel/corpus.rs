use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::parse::parse_type_with_names;
use super::{ClassDef, MethodSignature, TypeEnv, TypeError};

/// Maximum number of (transitively) referenced classes a corpus entry may
/// drag in before it is considered unresolvable.
pub const DEFAULT_DEPENDENCY_CAP: usize = 10;

/// A class line of a corpus file, before type resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub name: String,
    pub fields: Vec<(String, String)>,
    #[serde(default = "yes")]
    pub constructible: bool,
    #[serde(default = "yes")]
    pub gettable: bool,
}

fn yes() -> bool {
    true
}

/// A method line of a corpus file, before type resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodRecord {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub doc: String,
    pub params: Vec<(String, String)>,
    pub returns: String,
    pub builtin: String,
    #[serde(default, rename = "outParams")]
    pub out_params: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub signature: MethodSignature,
    pub doc: String,
    /// Classes named directly by the signature.
    pub class_refs: Vec<String>,
    pub builtin_key: String,
    /// 0-based indices of input parameters the implementation mutates.
    pub out_params: BTreeSet<usize>,
    /// False when the transitive class dependencies exceed the cap.
    pub resolvable: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub env: TypeEnv,
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn get(&self, id: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Incrementally validates corpus records in file order.
///
/// Class fields may reference any class declared via [`CorpusBuilder::declare`]
/// (so classes can be mutually recursive); method signatures may only use
/// classes whose definitions were added before them.
#[derive(Debug, Clone)]
pub struct CorpusBuilder {
    declared: BTreeSet<String>,
    env: TypeEnv,
    entries: Vec<CorpusEntry>,
    dependency_cap: usize,
}

impl Default for CorpusBuilder {
    fn default() -> Self {
        CorpusBuilder::new(DEFAULT_DEPENDENCY_CAP)
    }
}

impl CorpusBuilder {
    pub fn new(dependency_cap: usize) -> Self {
        CorpusBuilder { declared: BTreeSet::new(), env: TypeEnv::new(), entries: Vec::new(), dependency_cap }
    }

    pub fn declare(&mut self, class_name: &str) {
        self.declared.insert(class_name.into());
    }

    pub fn add_class(&mut self, record: &ClassRecord) -> Result<(), TypeError> {
        let mut names = self.declared.clone();
        names.insert(record.name.clone());
        names.extend(self.env.classes().map(|c| c.name.clone()));
        let fields = record
            .fields
            .iter()
            .map(|(name, ty)| Ok((name.clone(), parse_type_with_names(ty, &names)?)))
            .collect::<Result<Vec<_>, TypeError>>()?;
        let class = ClassDef::new(record.name.clone(), fields, record.constructible, record.gettable)?;
        self.env.insert(class)
    }

    pub fn add_method(&mut self, record: &MethodRecord) -> Result<(), TypeError> {
        if self.entries.iter().any(|e| e.id == record.id) {
            return Err(TypeError::InvalidSignature {
                name: record.name.clone(),
                reason: alloc::format!("duplicate entry id `{}`", record.id),
            });
        }
        let params = record
            .params
            .iter()
            .map(|(name, ty)| Ok((name.clone(), super::parse_type(ty, &self.env)?)))
            .collect::<Result<Vec<_>, TypeError>>()?;
        let returns = super::parse_type(&record.returns, &self.env)?;
        let signature = MethodSignature::new(record.name.clone(), params, returns)?;
        if let Some(bad) = record.out_params.iter().find(|&&i| i >= signature.params.len()) {
            return Err(TypeError::InvalidSignature {
                name: record.name.clone(),
                reason: alloc::format!("outParams index {bad} out of range"),
            });
        }
        self.entries.push(CorpusEntry {
            id: record.id.clone(),
            class_refs: signature.referenced_classes().into_iter().collect(),
            signature,
            doc: record.doc.clone(),
            builtin_key: record.builtin.clone(),
            out_params: record.out_params.iter().copied().collect(),
            resolvable: true,
        });
        Ok(())
    }

    pub fn finish(self) -> Result<Corpus, TypeError> {
        self.env.validate()?;
        let env = self.env;
        let cap = self.dependency_cap;
        let entries = self
            .entries
            .into_iter()
            .map(|mut entry| {
                let roots = entry.class_refs.iter().cloned().collect();
                entry.resolvable = env.transitive_classes(&roots).len() <= cap;
                entry
            })
            .collect();
        Ok(Corpus { env, entries })
    }
}
