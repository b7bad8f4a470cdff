//! Depth-first branch and bound over services in topological order.
//!
//! Candidate regions are tried in request order and the incumbent starts as
//! the best single-region plan. Ties on cost are broken towards the
//! lexicographically smallest assignment vector (workflow order, candidate
//! order), so a node is pruned on an equal bound only when none of its
//! completions can precede the incumbent in that order. The returned plan is
//! therefore the same for any number of worker threads.

use std::cmp::Ordering as CmpOrdering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use super::instance::{Cost, Instance};
use super::SolverOptions;

pub(crate) struct Outcome {
    /// Candidate index per service, in workflow order.
    pub vector: Vec<usize>,
    pub nodes: u64,
    pub complete: bool,
}

struct Incumbent {
    cost: Cost,
    vector: Vec<usize>,
}

impl Incumbent {
    fn offer(&mut self, cost: Cost, vector: Vec<usize>) {
        if cost < self.cost || (cost == self.cost && vector < self.vector) {
            self.cost = cost;
            self.vector = vector;
        }
    }
}

struct Shared {
    best: Mutex<Incumbent>,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
}

struct Worker<'a> {
    inst: &'a Instance,
    shared: &'a Shared,
    assign: Vec<usize>,
    upto: Vec<Cost>,
    movement: Vec<Cost>,
    counts: Vec<u32>,
    used: usize,
    scratch: Vec<Cost>,
}

impl<'a> Worker<'a> {
    fn new(inst: &'a Instance, shared: &'a Shared) -> Self {
        Worker {
            inst,
            shared,
            assign: Vec::with_capacity(inst.n),
            upto: Vec::with_capacity(inst.n),
            movement: Vec::with_capacity(inst.n),
            counts: vec![0; inst.k],
            used: 0,
            scratch: Vec::with_capacity(inst.n),
        }
    }

    fn push(&mut self, r: usize) {
        let t = self.assign.len();
        let v = self.inst.upto(t, r, &self.assign, &self.upto);
        let m = self.movement.last().copied().unwrap_or(0).max(v);
        self.assign.push(r);
        self.upto.push(v);
        self.movement.push(m);
        if self.counts[r] == 0 {
            self.used += 1;
        }
        self.counts[r] += 1;
    }

    fn pop(&mut self) {
        let r = self.assign.pop().expect("non-empty prefix");
        self.upto.pop();
        self.movement.pop();
        self.counts[r] -= 1;
        if self.counts[r] == 0 {
            self.used -= 1;
        }
    }

    fn allowed(&self) -> Vec<usize> {
        if self.used >= self.inst.max_engines {
            (0..self.inst.k).filter(|&r| self.counts[r] > 0).collect()
        } else {
            (0..self.inst.k).collect()
        }
    }

    fn workflow_vector(&self) -> Vec<usize> {
        (0..self.inst.n)
            .map(|i| self.assign[self.inst.pos[i]])
            .collect()
    }

    /// Whether some completion of the prefix is lexicographically smaller
    /// than `incumbent`.
    fn may_precede(&self, incumbent: &[usize]) -> bool {
        let depth = self.assign.len();
        for (i, &best) in incumbent.iter().enumerate() {
            let t = self.inst.pos[i];
            if t >= depth {
                return true;
            }
            match self.assign[t].cmp(&best) {
                CmpOrdering::Less => return true,
                CmpOrdering::Greater => return false,
                CmpOrdering::Equal => {}
            }
        }
        false
    }

    fn prune(&self, bound: Cost) -> bool {
        let best = self.shared.best.lock().unwrap();
        match bound.cmp(&best.cost) {
            CmpOrdering::Greater => true,
            CmpOrdering::Less => false,
            CmpOrdering::Equal => !self.may_precede(&best.vector),
        }
    }

    /// Counts a node; false once the budget is spent.
    fn visit(&self) -> bool {
        if self.shared.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        if self.shared.nodes.fetch_add(1, Ordering::Relaxed) >= self.shared.budget {
            self.shared.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn bound(&mut self, allowed: &[usize]) -> Cost {
        self.inst.lower_bound(
            &self.assign,
            &self.upto,
            self.used,
            allowed,
            &mut self.scratch,
        )
    }

    fn dfs(&mut self) {
        if !self.visit() {
            return;
        }
        if self.assign.len() == self.inst.n {
            let cost = self.movement.last().copied().unwrap_or(0) + self.inst.overhead(self.used);
            let vector = self.workflow_vector();
            self.shared.best.lock().unwrap().offer(cost, vector);
            return;
        }
        let allowed = self.allowed();
        let bound = self.bound(&allowed);
        if self.prune(bound) {
            return;
        }
        for r in allowed {
            self.push(r);
            self.dfs();
            self.pop();
        }
    }
}

pub(crate) fn search(inst: &Instance, opts: &SolverOptions) -> Outcome {
    // Best single-region plan as the starting incumbent.
    let mut start = Incumbent {
        cost: Cost::MAX,
        vector: vec![0; inst.n],
    };
    for r in 0..inst.k {
        start.offer(inst.objective(&vec![r; inst.n]), vec![r; inst.n]);
    }
    let shared = Shared {
        best: Mutex::new(start),
        nodes: AtomicU64::new(0),
        budget: opts.node_budget,
        exhausted: AtomicBool::new(false),
    };

    if inst.n > 0 {
        let mut root = Worker::new(inst, &shared);
        if root.visit() {
            let allowed = root.allowed();
            let bound = root.bound(&allowed);
            if !root.prune(bound) {
                let branch = |r: usize| {
                    let mut w = Worker::new(inst, &shared);
                    w.push(r);
                    w.dfs();
                };
                if opts.threads <= 1 {
                    allowed.into_iter().for_each(branch);
                } else {
                    match rayon::ThreadPoolBuilder::new()
                        .num_threads(opts.threads)
                        .build()
                    {
                        Ok(pool) => pool.install(|| allowed.into_par_iter().for_each(branch)),
                        Err(_) => allowed.into_iter().for_each(branch),
                    }
                }
            }
        }
    }

    let best = shared.best.into_inner().unwrap();
    Outcome {
        vector: best.vector,
        nodes: shared.nodes.load(Ordering::Relaxed).min(opts.node_budget),
        complete: !shared.exhausted.load(Ordering::Relaxed),
    }
}
