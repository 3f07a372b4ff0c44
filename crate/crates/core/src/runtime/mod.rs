//! Plan interpreter, builtin adaptees and the test runner.

mod builtins;
mod eval;
mod value;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::synth::AdapterPlan;
use crate::typemodel::TypeEnv;

pub use builtins::standard_registry;
pub use eval::{cast, eval_conversion, eval_plan, literal_value, Outcome};
pub use value::{first_mismatch, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuntimeError {
    /// A plan or builtin met a value of the wrong shape.
    #[error("type fault: {0}")]
    TypeFault(String),
    #[error("no builtin registered under `{0}`")]
    MissingBuiltin(String),
    #[error("null dereference: {0}")]
    NullDereference(String),
    /// The builtin rejected its input (e.g. mismatched matrix sizes).
    #[error("{0}")]
    Failed(String),
}

/// Host implementation of a corpus method. Receives the argument list
/// (mutations are visible to the caller) and returns the result, `None`
/// for void methods.
pub type BuiltinFn = Box<dyn Fn(&mut Vec<Value>) -> Result<Option<Value>, RuntimeError> + Send + Sync>;

#[derive(Default)]
pub struct BuiltinRegistry {
    functions: BTreeMap<String, BuiltinFn>,
}

impl core::fmt::Debug for BuiltinRegistry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_set().entries(self.functions.keys()).finish()
    }
}

impl BuiltinRegistry {
    pub fn new() -> Self {
        BuiltinRegistry::default()
    }

    pub fn register(
        &mut self,
        key: &str,
        f: impl Fn(&mut Vec<Value>) -> Result<Option<Value>, RuntimeError> + Send + Sync + 'static,
    ) {
        self.functions.insert(key.into(), Box::new(f));
    }

    pub fn get(&self, key: &str) -> Option<&BuiltinFn> {
        self.functions.get(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.functions.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.functions.keys().map(String::as_str)
    }

    /// Calls a builtin directly.
    pub fn call(&self, key: &str, args: &mut Vec<Value>) -> Result<Option<Value>, RuntimeError> {
        let f = self.get(key).ok_or_else(|| RuntimeError::MissingBuiltin(key.into()))?;
        f(args)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TestCase {
    pub args: Vec<Value>,
    pub expect_return: Option<Value>,
    /// Expected post-call state of adapter arguments, by 0-based index.
    pub expect_param_states: BTreeMap<usize, Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub passed: bool,
    /// First differing location, e.g. `return` or `param1[2].x`.
    pub mismatch: Option<String>,
    pub fault: Option<RuntimeError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub results: Vec<TestResult>,
}

impl TestReport {
    pub fn passed(&self) -> bool {
        !self.results.is_empty() && self.results.iter().all(|r| r.passed)
    }

    pub fn pass_count(&self) -> usize {
        self.results.iter().filter(|r| r.passed).count()
    }

    pub fn first_failure(&self) -> Option<(usize, &TestResult)> {
        self.results.iter().enumerate().find(|(_, r)| !r.passed)
    }
}

impl core::fmt::Display for TestReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, r) in self.results.iter().enumerate() {
            match (&r.fault, &r.mismatch) {
                _ if r.passed => writeln!(f, "test {i}: pass")?,
                (Some(fault), _) => writeln!(f, "test {i}: fault: {fault}")?,
                (None, Some(path)) => writeln!(f, "test {i}: mismatch at {path}")?,
                (None, None) => writeln!(f, "test {i}: fail")?,
            }
        }
        write!(f, "{}/{} passed", self.pass_count(), self.results.len())
    }
}

/// Runs every test; faults are recorded as failures, never propagated.
pub fn run_tests(plan: &AdapterPlan, tests: &[TestCase], registry: &BuiltinRegistry, env: &TypeEnv) -> TestReport {
    let results = tests.iter().map(|t| run_one(plan, t, registry, env)).collect();
    TestReport { results }
}

fn run_one(plan: &AdapterPlan, test: &TestCase, registry: &BuiltinRegistry, env: &TypeEnv) -> TestResult {
    let outcome = match eval_plan(plan, &test.args, registry, env) {
        Ok(o) => o,
        Err(fault) => return TestResult { passed: false, mismatch: None, fault: Some(fault) },
    };
    let fail = |path: String| TestResult { passed: false, mismatch: Some(path), fault: None };
    match (&test.expect_return, &outcome.returned) {
        (Some(expected), Some(actual)) => {
            if let Some(rest) = first_mismatch(expected, actual) {
                return fail(alloc::format!("return{rest}"));
            }
        }
        (None, None) => {}
        _ => return fail("return".to_string()),
    }
    for (&i, expected) in &test.expect_param_states {
        let Some(actual) = outcome.params.get(i) else {
            return fail(alloc::format!("param{i}"));
        };
        if let Some(rest) = first_mismatch(expected, actual) {
            return fail(alloc::format!("param{i}{rest}"));
        }
    }
    TestResult { passed: true, mismatch: None, fault: None }
}
