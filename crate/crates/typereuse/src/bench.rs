//! The bundled reuse benchmark: ten queries whose corpus counterparts have
//! deliberately different signatures.

use std::time::{Duration, Instant};

use typereuse_core::driver::{code_reuse, ReuseConfig, ReuseResult};
use typereuse_core::runtime::BuiltinRegistry;
use typereuse_core::typemodel::{Corpus, TypeEnv};

use crate::error::Result;
use crate::json::{decode_query, LoadedQuery};

pub struct BenchTask {
    pub name: &'static str,
    /// Corpus entry id a correct run should reuse.
    pub expected_adaptee: &'static str,
    pub source: &'static str,
}

pub const TASKS: [BenchTask; 10] = [
    task("BresenhamLine", "geom.bresenham", include_str!("../data/tasks/bresenham_line.json")),
    task("MatrixMultiplication", "matrix.multiply", include_str!("../data/tasks/matrix_multiplication.json")),
    task("TransposeMatrix", "matrix.transpose", include_str!("../data/tasks/transpose_matrix.json")),
    task("MatrixAddition", "matrix.add", include_str!("../data/tasks/matrix_addition.json")),
    task("DotProduct", "vector.dotProduct", include_str!("../data/tasks/dot_product.json")),
    task("LcsInteger", "seq.lcs", include_str!("../data/tasks/lcs_integer.json")),
    task("CountingSort", "sort.counting", include_str!("../data/tasks/counting_sort.json")),
    task("RemoveDuplicates", "list.removeDuplicates", include_str!("../data/tasks/remove_duplicates.json")),
    task("ListAverage", "stats.mean", include_str!("../data/tasks/list_average.json")),
    task("PrimeSieve", "primes.between", include_str!("../data/tasks/prime_sieve.json")),
];

const fn task(name: &'static str, expected_adaptee: &'static str, source: &'static str) -> BenchTask {
    BenchTask { name, expected_adaptee, source }
}

impl BenchTask {
    pub fn load(&self, corpus_env: &TypeEnv) -> Result<LoadedQuery> {
        decode_query(&serde_json::from_str(self.source)?, corpus_env, None)
    }
}

pub struct TaskRun {
    pub name: &'static str,
    pub result: ReuseResult,
    pub elapsed: Duration,
    pub expected_adaptee: &'static str,
    pub env: TypeEnv,
}

impl TaskRun {
    /// Succeeded by reusing the intended corpus method.
    pub fn passed(&self) -> bool {
        self.result.success().is_some_and(|s| s.adaptee_id == self.expected_adaptee)
    }
}

pub fn run_task(task: &BenchTask, corpus: &Corpus, registry: &BuiltinRegistry, cfg: &ReuseConfig) -> Result<TaskRun> {
    let loaded = task.load(&corpus.env)?;
    let start = Instant::now();
    let result = code_reuse(&loaded.query, corpus, registry, cfg)?;
    Ok(TaskRun {
        name: task.name,
        result,
        elapsed: start.elapsed(),
        expected_adaptee: task.expected_adaptee,
        env: loaded.env,
    })
}

/// Fixed-width results table, one row per task.
pub fn render_table(runs: &[TaskRun]) -> String {
    let mut out = format!(
        "{:<22} {:<8} {:<24} {:>5} {:>5} {:>5} {:>10}\n",
        "task", "result", "adaptee", "cand", "align", "plans", "time_ms"
    );
    for run in runs {
        let a = run.result.attempts;
        let adaptee = run.result.success().map_or("-", |s| s.adaptee_id.as_str());
        out.push_str(&format!(
            "{:<22} {:<8} {:<24} {:>5} {:>5} {:>5} {:>10.2}\n",
            run.name,
            if run.passed() { "pass" } else { "FAIL" },
            adaptee,
            a.candidates,
            a.alignments,
            a.plans,
            run.elapsed.as_secs_f64() * 1e3
        ));
    }
    let passed = runs.iter().filter(|r| r.passed()).count();
    out.push_str(&format!("{passed}/{} tasks passed\n", runs.len()));
    out
}
