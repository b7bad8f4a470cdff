//! Integer-scaled view of a solve request used by the branch-and-bound search.
//!
//! Every invocation cost, hop cost and the overhead rate is multiplied by the
//! least common multiple of their denominators, so the search runs on `i128`
//! and converts back to [`Rational`] only for the result.

use super::SolveRequest;
use crate::cost::invocation_cost;
use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

pub(crate) type Cost = i128;

pub(crate) struct Instance {
    pub n: usize,
    pub k: usize,
    /// Topological position -> workflow index.
    pub order: Vec<usize>,
    /// Workflow index -> topological position.
    pub pos: Vec<usize>,
    /// Predecessors of each position, as positions.
    pub preds: Vec<Vec<usize>>,
    /// `invo[t * k + r]`: invoking the service at position `t` from candidate `r`.
    invo: Vec<Cost>,
    /// `hop[t][a * k + b]`: shipping the output of position `t` from candidate `a` to `b`.
    hop: Vec<Vec<Cost>>,
    pub rate: Cost,
    pub max_engines: usize,
    scale: i128,
}

impl Instance {
    pub(crate) fn new(req: &SolveRequest) -> Result<Self> {
        req.validate()?;
        let w = &req.workflow;
        let cm = &req.cost_matrix;
        let graph = w.graph()?;
        let n = w.len();
        let k = req.candidate_regions.len();
        let cand: Vec<usize> = req
            .candidate_regions
            .iter()
            .map(|r| cm.index_of(r.as_str()).expect("validated"))
            .collect();

        let order = graph.topo.clone();
        let mut pos = vec![0; n];
        for (t, &i) in order.iter().enumerate() {
            pos[i] = t;
        }
        let preds: Vec<Vec<usize>> = order
            .iter()
            .map(|&i| graph.preds[i].iter().map(|&j| pos[j]).collect())
            .collect();

        let mut invo_q = Vec::with_capacity(n * k);
        let mut hop_q = Vec::with_capacity(n);
        for &i in &order {
            let svc = &w.services()[i];
            for region in &req.candidate_regions {
                invo_q.push(invocation_cost(svc, region, cm)?);
            }
            let mut h = Vec::with_capacity(k * k);
            for &a in &cand {
                for &b in &cand {
                    h.push(cm.engine_cost_at(a, b) * svc.out_size);
                }
            }
            hop_q.push(h);
        }

        let scale = common_denominator(
            invo_q
                .iter()
                .chain(hop_q.iter().flatten())
                .chain(std::iter::once(&req.overhead_rate)),
        )
        .ok_or(Error::ScaleOverflow)?;
        let to_int = |q: &Rational| -> Result<Cost> {
            q.numer()
                .checked_mul(scale / q.denom())
                .ok_or(Error::ScaleOverflow)
        };
        let invo: Vec<Cost> = invo_q.iter().map(to_int).collect::<Result<_>>()?;
        let hop: Vec<Vec<Cost>> = hop_q
            .iter()
            .map(|h| h.iter().map(to_int).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let rate = to_int(&req.overhead_rate)?;

        // Any objective value is at most n * (max invocation + max hop) + rate * k.
        let max_invo = invo.iter().copied().max().unwrap_or(0);
        let max_hop = hop.iter().flatten().copied().max().unwrap_or(0);
        max_invo
            .checked_add(max_hop)
            .and_then(|v| v.checked_mul(n as i128 + 1))
            .and_then(|v| v.checked_add(rate.checked_mul(k as i128)?))
            .ok_or(Error::ScaleOverflow)?;

        Ok(Instance {
            n,
            k,
            order,
            pos,
            preds,
            invo,
            hop,
            rate,
            max_engines: req.max_engines.unwrap_or(k),
            scale,
        })
    }

    #[inline]
    pub(crate) fn invo(&self, t: usize, r: usize) -> Cost {
        self.invo[t * self.k + r]
    }

    #[inline]
    pub(crate) fn hop(&self, t: usize, from: usize, to: usize) -> Cost {
        self.hop[t][from * self.k + to]
    }

    pub(crate) fn to_rational(&self, c: Cost) -> Rational {
        Rational::new(c, self.scale)
    }

    /// Completion time of position `t` placed on `r`, given the completion
    /// times and regions of all earlier positions.
    #[inline]
    pub(crate) fn upto(&self, t: usize, r: usize, assign: &[usize], upto: &[Cost]) -> Cost {
        let arrival = self.preds[t]
            .iter()
            .map(|&p| upto[p] + self.hop(p, assign[p], r))
            .max()
            .unwrap_or(0);
        arrival + self.invo(t, r)
    }

    pub(crate) fn overhead(&self, engines_used: usize) -> Cost {
        self.rate * (engines_used.max(1) as i128 - 1)
    }

    /// Objective of a complete assignment given by topological position.
    pub(crate) fn objective(&self, assign: &[usize]) -> Cost {
        let mut upto = Vec::with_capacity(self.n);
        for t in 0..self.n {
            let v = self.upto(t, assign[t], assign, &upto);
            upto.push(v);
        }
        let mut used = assign.to_vec();
        used.sort_unstable();
        used.dedup();
        upto.into_iter().max().unwrap_or(0) + self.overhead(used.len())
    }

    /// Admissible bound on the objective of every completion of a prefix.
    ///
    /// Assigned positions contribute their exact completion times. For each
    /// unassigned position, the bound is the cheapest region choice given
    /// exact arrivals from assigned predecessors and optimistic (zero-hop)
    /// arrivals from unassigned ones. Overhead counts only engines already used.
    pub(crate) fn lower_bound(
        &self,
        assign: &[usize],
        upto: &[Cost],
        engines_used: usize,
        allowed: &[usize],
        scratch: &mut Vec<Cost>,
    ) -> Cost {
        let depth = assign.len();
        scratch.clear();
        scratch.extend_from_slice(upto);
        let mut movement = upto.iter().copied().max().unwrap_or(0);
        for t in depth..self.n {
            let mut best = Cost::MAX;
            for &r in allowed {
                let arrival = self.preds[t]
                    .iter()
                    .map(|&p| {
                        if p < depth {
                            scratch[p] + self.hop(p, assign[p], r)
                        } else {
                            scratch[p]
                        }
                    })
                    .max()
                    .unwrap_or(0);
                best = best.min(arrival + self.invo(t, r));
            }
            scratch.push(best);
            movement = movement.max(best);
        }
        movement + self.overhead(engines_used)
    }
}
