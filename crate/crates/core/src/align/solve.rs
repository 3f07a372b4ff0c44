//! Exact branch-and-bound over the 0-1 program, with next-best enumeration
//! by blocking previously returned solutions.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{AlignError, AlignProblem, Alignment};
use crate::distance::{delta, delta_list, Cost};
use crate::typemodel::{TypeEnv, TypeError};

/// Cheapest feasible alignment; equal costs are broken by
/// [`AlignProblem::tie_key`].
pub fn solve_optimal(p: &AlignProblem) -> Result<Alignment, AlignError> {
    Solver::new(p).solve(&BTreeSet::new()).ok_or(AlignError::Infeasible)
}

/// Up to `limit` distinct alignments in nondecreasing cost.
pub fn enumerate_alignments(p: &AlignProblem, limit: usize) -> Vec<Alignment> {
    Alignments::new(p).take(limit).collect()
}

/// Lazy next-best enumeration: each call re-solves with every earlier
/// solution excluded.
pub struct Alignments<'a> {
    solver: Solver<'a>,
    blocked: BTreeSet<Vec<usize>>,
    exhausted: bool,
}

impl<'a> Alignments<'a> {
    pub fn new(p: &'a AlignProblem) -> Self {
        Alignments { solver: Solver::new(p), blocked: BTreeSet::new(), exhausted: false }
    }
}

impl Iterator for Alignments<'_> {
    type Item = Alignment;

    fn next(&mut self) -> Option<Alignment> {
        if self.exhausted {
            return None;
        }
        match self.solver.solve(&self.blocked) {
            Some(a) => {
                self.blocked.insert(a.ids.clone());
                Some(a)
            }
            None => {
                self.exhausted = true;
                None
            }
        }
    }
}

/// Recomputes an alignment's cost from the slot types alone.
pub fn cost_of(m: &Alignment, env: &TypeEnv) -> Result<Cost, TypeError> {
    let mut total = Cost::from_integer(0);
    for v in &m.variables {
        let d = if v.is_one_to_one() {
            delta(&v.adaptee[0].ty, &v.adapter[0].ty, env)?
        } else if v.adapter.len() > 1 {
            let many: Vec<_> = v.adapter.iter().map(|s| s.ty.clone()).collect();
            delta_list(&v.adaptee[0].ty, &many, env)?
        } else {
            let many: Vec<_> = v.adaptee.iter().map(|s| s.ty.clone()).collect();
            delta_list(&v.adapter[0].ty, &many, env)?
        };
        total += d.value();
    }
    Ok(total)
}

struct Best {
    cost: Cost,
    key: Vec<Vec<usize>>,
    ids: Vec<usize>,
}

struct Solver<'a> {
    p: &'a AlignProblem,
    adapter_pos: Vec<Vec<usize>>,
    adaptee_pos: Vec<Vec<usize>>,
    /// Per adapter slot, candidate variables sorted by cost.
    candidates: Vec<Vec<usize>>,
    /// Per adapter slot, the smallest per-slot share `cost / |adapter group|`
    /// among its variables: an admissible lower bound on what covering it
    /// adds.
    min_share: Vec<Option<Cost>>,
}

struct State {
    covered: Vec<bool>,
    used: Vec<bool>,
    chosen: Vec<usize>,
    partial: Cost,
}

impl<'a> Solver<'a> {
    fn new(p: &'a AlignProblem) -> Self {
        let adapter_pos: Vec<Vec<usize>> = (0..p.variables.len()).map(|id| p.variable_adapter_positions(id)).collect();
        let adaptee_pos: Vec<Vec<usize>> = (0..p.variables.len()).map(|id| p.variable_adaptee_positions(id)).collect();
        let candidates: Vec<Vec<usize>> = p
            .by_adapter
            .iter()
            .map(|ids| {
                let mut ids = ids.clone();
                ids.sort_by(|&a, &b| p.variables[a].cost().cmp(&p.variables[b].cost()).then(a.cmp(&b)));
                ids
            })
            .collect();
        let min_share = p
            .by_adapter
            .iter()
            .map(|ids| {
                ids.iter()
                    .map(|&id| p.variables[id].cost() / Cost::from_integer(adapter_pos[id].len() as u64))
                    .min()
            })
            .collect();
        Solver { p, adapter_pos, adaptee_pos, candidates, min_share }
    }

    fn solve(&self, blocked: &BTreeSet<Vec<usize>>) -> Option<Alignment> {
        if self.min_share.iter().any(Option::is_none) {
            return None;
        }
        let mut state = State {
            covered: vec![false; self.p.adapter_slots.len()],
            used: vec![false; self.p.adaptee_slots.len()],
            chosen: Vec::new(),
            partial: Cost::from_integer(0),
        };
        let mut best = None;
        self.branch(&mut state, blocked, &mut best);
        best.map(|b: Best| self.p.alignment(&b.ids))
    }

    fn available(&self, state: &State, id: usize) -> bool {
        self.adapter_pos[id].iter().all(|&r| !state.covered[r]) && self.adaptee_pos[id].iter().all(|&e| !state.used[e])
    }

    fn branch(&self, state: &mut State, blocked: &BTreeSet<Vec<usize>>, best: &mut Option<Best>) {
        let mut bound = state.partial;
        for (r, covered) in state.covered.iter().enumerate() {
            if !covered {
                bound += self.min_share[r].unwrap_or_default();
            }
        }
        if best.as_ref().is_some_and(|b| bound > b.cost) {
            return;
        }

        // Most constrained uncovered adapter slot.
        let mut pick: Option<(usize, usize)> = None;
        for r in (0..state.covered.len()).filter(|&r| !state.covered[r]) {
            let n = self.candidates[r].iter().filter(|&&id| self.available(state, id)).count();
            if n == 0 {
                return;
            }
            if pick.is_none_or(|(_, m)| n < m) {
                pick = Some((r, n));
            }
        }

        let Some((r, _)) = pick else {
            let mut ids = state.chosen.clone();
            ids.sort_unstable();
            if blocked.contains(&ids) {
                return;
            }
            let key = self.p.tie_key(&ids);
            let better = match best {
                None => true,
                Some(b) => (state.partial, &key) < (b.cost, &b.key),
            };
            if better {
                *best = Some(Best { cost: state.partial, key, ids });
            }
            return;
        };

        for &id in &self.candidates[r] {
            if !self.available(state, id) {
                continue;
            }
            let cost = self.p.variables[id].cost();
            for &a in &self.adapter_pos[id] {
                state.covered[a] = true;
            }
            for &e in &self.adaptee_pos[id] {
                state.used[e] = true;
            }
            state.chosen.push(id);
            let saved = state.partial;
            state.partial += cost;

            self.branch(state, blocked, best);

            state.partial = saved;
            state.chosen.pop();
            for &a in &self.adapter_pos[id] {
                state.covered[a] = false;
            }
            for &e in &self.adaptee_pos[id] {
                state.used[e] = false;
            }
        }
    }
}
