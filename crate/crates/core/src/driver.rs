//! The reuse loop: keyword search, re-ranking, then for each candidate in
//! ranked order, alignments in cost order and, for each alignment, adapter
//! plans in index order until one passes every test.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::align::{build_variables_with, Alignment, Alignments, DEFAULT_MAX_GROUP};
use crate::distance::{Cost, DistanceTable};
use crate::rank::{rerank, RankStatus, RankedCandidate};
use crate::runtime::{run_tests, BuiltinRegistry, TestCase, TestReport};
use crate::search::{SearchIndex, DEFAULT_TOP_K};
use crate::synth::{AdapterPlan, AdapterSynthesizer, DEFAULT_DEPTH, PLAN_CAP};
use crate::typemodel::{Corpus, CorpusEntry, MethodSignature, TypeEnv, TypeError, DEFAULT_DEPENDENCY_CAP};

#[derive(Debug, Clone, PartialEq)]
pub struct ReuseQuery {
    pub signature: MethodSignature,
    pub description: String,
    pub tests: Vec<TestCase>,
    /// Classes used by the signature that the corpus may not define.
    pub classes: TypeEnv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReuseConfig {
    pub top_k: usize,
    pub max_alignments: usize,
    pub max_plans: usize,
    pub max_group: usize,
    pub depth: usize,
    pub dependency_cap: usize,
}

impl Default for ReuseConfig {
    fn default() -> Self {
        ReuseConfig {
            top_k: DEFAULT_TOP_K,
            max_alignments: 20,
            max_plans: PLAN_CAP,
            max_group: DEFAULT_MAX_GROUP,
            depth: DEFAULT_DEPTH,
            dependency_cap: DEFAULT_DEPENDENCY_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Attempts {
    /// Candidates whose alignment was attempted.
    pub candidates: usize,
    pub alignments: usize,
    /// Plans executed against the tests.
    pub plans: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateOutcome {
    Passed,
    /// Every alignment and plan within the limits failed.
    Exhausted,
    Infeasible,
    Unresolvable,
    /// Not reached because an earlier candidate passed.
    NotVisited,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateLog {
    pub entry_id: String,
    pub rank: RankedCandidate,
    pub alignments: usize,
    pub plans: usize,
    pub outcome: CandidateOutcome,
    /// Why alignments produced no plan, one line each.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReuseSuccess {
    pub adaptee_id: String,
    pub alignment: Alignment,
    /// 0-based position of the alignment in cost order.
    pub alignment_index: usize,
    pub plan_index: usize,
    pub plan: AdapterPlan,
    pub report: TestReport,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReuseOutcome {
    Success(Box<ReuseSuccess>),
    Failure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReuseResult {
    pub outcome: ReuseOutcome,
    pub attempts: Attempts,
    /// Keyword hits in keyword order.
    pub keyword_ranking: Vec<String>,
    /// One log per re-ranked candidate, in visiting order.
    pub candidates: Vec<CandidateLog>,
}

impl ReuseResult {
    pub fn success(&self) -> Option<&ReuseSuccess> {
        match &self.outcome {
            ReuseOutcome::Success(s) => Some(s),
            ReuseOutcome::Failure => None,
        }
    }
}

/// Memoised δ over every (query slot, candidate slot) pair and every grouped
/// list that variable building encounters.
pub fn compute_type_distance_matrix(
    query: &MethodSignature,
    candidates: &[&CorpusEntry],
    env: &TypeEnv,
    max_group: usize,
) -> Result<DistanceTable, TypeError> {
    let mut table = DistanceTable::new();
    for entry in candidates {
        for r in query.slots() {
            for e in entry.signature.slots() {
                table.delta(&r.ty, &e.ty, env)?;
            }
        }
        build_variables_with(query, &entry.signature, env, max_group, &mut table)?;
    }
    Ok(table)
}

/// Runs the full reuse loop. Fails only when the query's classes conflict
/// with the corpus; an unsuccessful search is a [`ReuseOutcome::Failure`].
pub fn code_reuse(
    query: &ReuseQuery,
    corpus: &Corpus,
    registry: &BuiltinRegistry,
    cfg: &ReuseConfig,
) -> Result<ReuseResult, TypeError> {
    let env = corpus.env.merged(&query.classes)?;
    let hits = SearchIndex::build(&corpus.entries).search(&query.description, cfg.top_k);
    let candidates: Vec<CorpusEntry> = hits
        .iter()
        .filter_map(|h| corpus.get(&h.entry_id))
        .map(|entry| {
            let mut entry = entry.clone();
            let roots: BTreeSet<String> = entry.class_refs.iter().cloned().collect();
            entry.resolvable &= env.transitive_classes(&roots).len() <= cfg.dependency_cap;
            entry
        })
        .collect();
    let refs: Vec<&CorpusEntry> = candidates.iter().collect();
    let resolvable: Vec<&CorpusEntry> = refs.iter().copied().filter(|e| e.resolvable).collect();
    let mut table = compute_type_distance_matrix(&query.signature, &resolvable, &env, cfg.max_group)
        .unwrap_or_default();
    let ranked = rerank(&query.signature, &refs, &env, cfg.max_group, &mut table);

    let mut result = ReuseResult {
        outcome: ReuseOutcome::Failure,
        attempts: Attempts::default(),
        keyword_ranking: hits.into_iter().map(|h| h.entry_id).collect(),
        candidates: Vec::new(),
    };
    for rank in ranked {
        let entry = refs.iter().find(|e| e.id == rank.entry_id).copied().expect("ranked ids come from candidates");
        let mut log = CandidateLog {
            entry_id: rank.entry_id.clone(),
            rank,
            alignments: 0,
            plans: 0,
            outcome: CandidateOutcome::NotVisited,
            notes: Vec::new(),
        };
        if result.success().is_some() {
            result.candidates.push(log);
            continue;
        }
        result.attempts.candidates += 1;
        log.outcome = match log.rank.status {
            RankStatus::Unresolvable => CandidateOutcome::Unresolvable,
            RankStatus::Infeasible => CandidateOutcome::Infeasible,
            RankStatus::Feasible => match try_candidate(query, entry, &env, registry, cfg, &mut table, &mut log) {
                Some(success) => {
                    result.outcome = ReuseOutcome::Success(Box::new(success));
                    CandidateOutcome::Passed
                }
                None => CandidateOutcome::Exhausted,
            },
        };
        result.attempts.alignments += log.alignments;
        result.attempts.plans += log.plans;
        result.candidates.push(log);
    }
    Ok(result)
}

fn try_candidate(
    query: &ReuseQuery,
    entry: &CorpusEntry,
    env: &TypeEnv,
    registry: &BuiltinRegistry,
    cfg: &ReuseConfig,
    table: &mut DistanceTable,
    log: &mut CandidateLog,
) -> Option<ReuseSuccess> {
    let problem = match build_variables_with(&query.signature, &entry.signature, env, cfg.max_group, table) {
        Ok(p) => p,
        Err(e) => {
            log.notes.push(e.to_string());
            return None;
        }
    };
    for (alignment_index, alignment) in Alignments::new(&problem).take(cfg.max_alignments).enumerate() {
        log.alignments += 1;
        let synth = match AdapterSynthesizer::new(&alignment, &query.signature, entry, env, cfg.depth, cfg.max_plans) {
            Ok(s) => s,
            Err(e) => {
                log.notes.push(alloc::format!("alignment {}: {e}", describe_cost(&alignment.cost)));
                continue;
            }
        };
        for plan_index in 0..synth.available() {
            let Ok(plan) = synth.plan(plan_index) else { continue };
            if let Err(e) = plan.check(env) {
                log.notes.push(alloc::format!("plan {plan_index}: {e}"));
                continue;
            }
            log.plans += 1;
            let report = run_tests(&plan, &query.tests, registry, env);
            if report.passed() {
                return Some(ReuseSuccess {
                    adaptee_id: entry.id.clone(),
                    alignment,
                    alignment_index,
                    plan_index,
                    plan,
                    report,
                });
            }
        }
    }
    None
}

fn describe_cost(cost: &Cost) -> String {
    alloc::format!("@ {cost}")
}
