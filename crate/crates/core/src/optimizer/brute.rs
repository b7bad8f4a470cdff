//! Exhaustive enumeration, used as an oracle for the branch-and-bound search.

use super::{SolveRequest, SolverOptions};
use crate::cost::Evaluator;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub(crate) struct Enumerated {
    /// Candidate index per service, in workflow order.
    pub vector: Vec<usize>,
    pub evaluated: u64,
}

/// Number of assignments of `n` services to `k` regions, saturating.
pub(crate) fn space_size(k: usize, n: usize) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(k as u128))
}

pub(crate) fn enumerate(req: &SolveRequest, opts: &SolverOptions) -> Result<Enumerated> {
    req.validate()?;
    let w = &req.workflow;
    let cm = &req.cost_matrix;
    let n = w.len();
    let k = req.candidate_regions.len();
    let size = space_size(k, n);
    if size > opts.enumeration_cap {
        return Err(Error::SearchSpaceTooLarge {
            size,
            cap: opts.enumeration_cap,
        });
    }
    let eval = Evaluator::new(w, cm)?;
    let matrix_index: Vec<usize> = req
        .candidate_regions
        .iter()
        .map(|r| cm.index_of(r.as_str()).expect("validated"))
        .collect();
    let max_engines = req.max_engines.unwrap_or(k);

    let mut digits = vec![0usize; n];
    let mut engines = vec![0usize; n];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut evaluated = 0u64;
    let mut seen = vec![false; k];
    loop {
        seen.iter_mut().for_each(|s| *s = false);
        let mut used = 0;
        for &d in &digits {
            if !seen[d] {
                seen[d] = true;
                used += 1;
            }
        }
        if used <= max_engines {
            for (e, &d) in engines.iter_mut().zip(&digits) {
                *e = matrix_index[d];
            }
            let total =
                eval.movement(&engines) + req.overhead_rate * Rational::from(used as u32 - 1);
            evaluated += 1;
            // Vectors arrive in lexicographic order, so the first minimum wins ties.
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                best = Some((total, digits.clone()));
            }
        }

        // Odometer increment, last service fastest.
        let mut i = n;
        loop {
            if i == 0 {
                let (_, vector) = best.expect("the all-first-region plan is always feasible");
                return Ok(Enumerated { vector, evaluated });
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
        }
    }
}
