//! Exhaustive reference enumeration, used as a test oracle for the solver.

use alloc::vec;
use alloc::vec::Vec;

use super::{build_constraints, AlignError, AlignProblem, Alignment, Relation};

/// Largest variable count accepted by [`brute_force_alignments`].
pub const BRUTE_FORCE_CAP: usize = 25;

/// Every feasible assignment, sorted by cost then tie key.
///
/// Walks all `2^n` assignments in Gray-code order so each step flips a
/// single variable and constraint row sums update incrementally.
pub fn brute_force_alignments(p: &AlignProblem) -> Result<Vec<Alignment>, AlignError> {
    let n = p.variables.len();
    if n > BRUTE_FORCE_CAP {
        return Err(AlignError::TooLarge { variables: n, cap: BRUTE_FORCE_CAP });
    }
    let system = build_constraints(p);
    let mut rows_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, row) in system.rows.iter().enumerate() {
        for &v in &row.vars {
            rows_of[v].push(i);
        }
    }
    let violated = |row: usize, sum: usize| match system.rows[row].relation {
        Relation::Eq => sum != 1,
        Relation::Le => sum > 1,
    };

    let mut sums = vec![0usize; system.rows.len()];
    let mut bad = (0..system.rows.len()).filter(|&r| violated(r, 0)).count();
    let mut x = vec![false; n];
    let mut found = Vec::new();
    if bad == 0 {
        found.push(Vec::new());
    }
    for step in 1u64..(1u64 << n) {
        let flip = step.trailing_zeros() as usize;
        x[flip] = !x[flip];
        for &row in &rows_of[flip] {
            let before = violated(row, sums[row]);
            if x[flip] {
                sums[row] += 1;
            } else {
                sums[row] -= 1;
            }
            match (before, violated(row, sums[row])) {
                (true, false) => bad -= 1,
                (false, true) => bad += 1,
                _ => {}
            }
        }
        if bad == 0 {
            found.push((0..n).filter(|&v| x[v]).collect::<Vec<_>>());
        }
    }

    let mut out: Vec<(Vec<Vec<usize>>, Alignment)> =
        found.into_iter().map(|ids| (p.tie_key(&ids), p.alignment(&ids))).collect();
    out.sort_by(|(ka, a), (kb, b)| a.cost.cmp(&b.cost).then_with(|| ka.cmp(kb)));
    Ok(out.into_iter().map(|(_, a)| a).collect())
}
