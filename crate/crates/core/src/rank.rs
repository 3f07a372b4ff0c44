//! Re-ranking of keyword hits by optimal alignment cost.
//!
//! Sorting by ascending cost is the same order as sorting by the inverse
//! cost descending (with `1/0 = +inf`) and needs no division.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::align::{build_variables_with, solve_optimal};
use crate::distance::{Cost, DistanceTable};
use crate::typemodel::{CorpusEntry, MethodSignature, TypeEnv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RankStatus {
    Feasible,
    /// No alignment satisfies the constraints.
    Infeasible,
    /// Too many class dependencies, or types that do not resolve.
    Unresolvable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedCandidate {
    pub entry_id: String,
    /// 1-based position in the keyword ranking.
    pub original_rank: usize,
    /// Optimal alignment cost; `None` unless feasible.
    pub cost: Option<Cost>,
    pub status: RankStatus,
    /// 1-based position after re-ranking.
    pub final_rank: usize,
}

impl RankedCandidate {
    fn key_cmp(&self, other: &RankedCandidate) -> Ordering {
        self.status
            .cmp(&other.status)
            .then_with(|| match (self.cost, other.cost) {
                (Some(a), Some(b)) => a.cmp(&b),
                _ => Ordering::Equal,
            })
            .then(self.original_rank.cmp(&other.original_rank))
    }
}

/// Scores each candidate by its optimal alignment against `query` and sorts:
/// feasible by cost, then infeasible, then unresolvable; keyword order breaks
/// ties. Candidates are given in keyword order.
pub fn rerank(
    query: &MethodSignature,
    candidates: &[&CorpusEntry],
    env: &TypeEnv,
    max_group: usize,
    table: &mut DistanceTable,
) -> Vec<RankedCandidate> {
    let mut ranked: Vec<RankedCandidate> = candidates
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let (status, cost) = score(query, entry, env, max_group, table);
            RankedCandidate { entry_id: entry.id.clone(), original_rank: i + 1, cost, status, final_rank: 0 }
        })
        .collect();
    ranked.sort_by(RankedCandidate::key_cmp);
    for (i, c) in ranked.iter_mut().enumerate() {
        c.final_rank = i + 1;
    }
    ranked
}

fn score(
    query: &MethodSignature,
    entry: &CorpusEntry,
    env: &TypeEnv,
    max_group: usize,
    table: &mut DistanceTable,
) -> (RankStatus, Option<Cost>) {
    if !entry.resolvable {
        return (RankStatus::Unresolvable, None);
    }
    let Ok(problem) = build_variables_with(query, &entry.signature, env, max_group, table) else {
        return (RankStatus::Unresolvable, None);
    };
    match solve_optimal(&problem) {
        Ok(a) => (RankStatus::Feasible, Some(a.cost)),
        Err(_) => (RankStatus::Infeasible, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::DEFAULT_MAX_GROUP;
    use crate::typemodel::parse_signature;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn entry(id: &str, sig: &str) -> CorpusEntry {
        CorpusEntry {
            id: id.into(),
            signature: parse_signature(sig, &TypeEnv::default()).unwrap(),
            doc: String::new(),
            class_refs: Vec::new(),
            builtin_key: id.into(),
            out_params: BTreeSet::new(),
            resolvable: true,
        }
    }

    fn order(query: &str, entries: &[CorpusEntry]) -> Vec<RankedCandidate> {
        let q = parse_signature(query, &TypeEnv::default()).unwrap();
        let refs: Vec<&CorpusEntry> = entries.iter().collect();
        rerank(&q, &refs, &TypeEnv::default(), DEFAULT_MAX_GROUP, &mut DistanceTable::new())
    }

    #[test]
    fn exact_match_first_infeasible_and_unresolvable_last() {
        let mut hidden = entry("hidden", "int h(int a)");
        hidden.resolvable = false;
        let entries = vec![
            hidden,
            entry("collection", "int c(List<Integer> xs)"),
            entry("near", "long n(long a)"),
            entry("exact", "int e(int b)"),
        ];
        let ranked = order("int f(int x)", &entries);
        let ids: Vec<&str> = ranked.iter().map(|c| c.entry_id.as_str()).collect();
        assert_eq!(ids, vec!["exact", "near", "collection", "hidden"]);
        assert_eq!(ranked[0].cost, Some(Cost::from_integer(0)));
        assert_eq!(ranked[0].original_rank, 4);
        assert_eq!(ranked[2].status, RankStatus::Infeasible);
        assert_eq!(ranked[3].status, RankStatus::Unresolvable);
        assert_eq!(ranked.iter().map(|c| c.final_rank).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn equal_costs_keep_keyword_order() {
        let entries = vec![entry("b", "long g(long a)"), entry("a", "long h(long z)")];
        let ranked = order("int f(int x)", &entries);
        assert_eq!(ranked[0].entry_id, "b");
        assert_eq!(ranked[0].cost, ranked[1].cost);
    }
}
