//! Exact search for the deployment plan with the lowest total cost.

mod bnb;
mod brute;
mod instance;

use std::collections::HashSet;

use crate::cost::{evaluate, Assignment, CostReport, DeploymentPlan};
use crate::error::{Error, Result};
use crate::model::{CostMatrix, LocationId, ServiceId, Workflow};
use crate::rational::Rational;

use instance::Instance;

#[derive(Clone, Debug)]
pub struct SolveRequest {
    pub workflow: Workflow,
    pub cost_matrix: CostMatrix,
    /// Regions an engine may be placed in, in search (and tie-break) order.
    pub candidate_regions: Vec<LocationId>,
    pub overhead_rate: Rational,
    /// Hard cap on distinct engine regions.
    pub max_engines: Option<usize>,
}

impl SolveRequest {
    /// Every matrix location is a candidate; zero overhead; no engine cap.
    pub fn new(workflow: Workflow, cost_matrix: CostMatrix) -> Self {
        let candidate_regions = cost_matrix.locations().to_vec();
        SolveRequest {
            workflow,
            cost_matrix,
            candidate_regions,
            overhead_rate: Rational::ZERO,
            max_engines: None,
        }
    }

    pub fn with_overhead(mut self, rate: Rational) -> Self {
        self.overhead_rate = rate;
        self
    }

    pub fn with_max_engines(mut self, max: Option<usize>) -> Self {
        self.max_engines = max;
        self
    }

    pub fn with_candidates(mut self, regions: Vec<LocationId>) -> Self {
        self.candidate_regions = regions;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidRequest(m));
        let violations = self.workflow.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidWorkflow(violations));
        }
        if let Some(loc) = self
            .workflow
            .locations()
            .find(|l| !self.cost_matrix.contains(l.as_str()))
        {
            return Err(Error::UnknownLocation(loc.to_string()));
        }
        if self.candidate_regions.is_empty() {
            return bad("no candidate regions".into());
        }
        let mut seen = HashSet::new();
        for r in &self.candidate_regions {
            if !self.cost_matrix.contains(r.as_str()) {
                return Err(Error::UnknownLocation(r.to_string()));
            }
            if !seen.insert(r) {
                return bad(format!("candidate region {r} listed twice"));
            }
        }
        if self.overhead_rate.is_negative() {
            return bad(format!("negative overhead rate {}", self.overhead_rate));
        }
        if let Some(m) = self.max_engines {
            if m == 0 || m > self.candidate_regions.len() {
                return bad(format!(
                    "max engines {m} outside 1..={}",
                    self.candidate_regions.len()
                ));
            }
        }
        Ok(())
    }

    fn plan_from_vector(&self, vector: &[usize]) -> DeploymentPlan {
        let assignment: Assignment = self
            .workflow
            .services()
            .iter()
            .zip(vector)
            .map(|(s, &r)| (s.id.clone(), self.candidate_regions[r].clone()))
            .collect();
        DeploymentPlan::new(assignment, self.overhead_rate)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub plan: DeploymentPlan,
    pub report: CostReport,
    pub nodes_explored: u64,
    /// True when the search finished; false for baselines and budget cut-offs.
    pub proven_optimal: bool,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Branch-and-bound stops after visiting this many nodes.
    pub node_budget: u64,
    /// Worker threads for top-level branches. `nodes_explored` is only
    /// reproducible with a single thread; the plan always is.
    pub threads: usize,
    /// Largest search space brute force agrees to enumerate.
    pub enumeration_cap: u128,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            node_budget: 50_000_000,
            threads: 1,
            enumeration_cap: 10_000_000,
        }
    }
}

fn finish(req: &SolveRequest, plan: DeploymentPlan, nodes: u64, proven: bool) -> Result<Solution> {
    let report = evaluate(&req.workflow, &plan, &req.cost_matrix)?;
    Ok(Solution {
        plan,
        report,
        nodes_explored: nodes,
        proven_optimal: proven,
    })
}

pub fn solve_brute_force(req: &SolveRequest) -> Result<Solution> {
    solve_brute_force_with(req, &SolverOptions::default())
}

/// Enumerates every assignment and keeps the cheapest, earliest in
/// lexicographic order on ties.
pub fn solve_brute_force_with(req: &SolveRequest, opts: &SolverOptions) -> Result<Solution> {
    let found = brute::enumerate(req, opts)?;
    finish(
        req,
        req.plan_from_vector(&found.vector),
        found.evaluated,
        true,
    )
}

pub fn solve_branch_and_bound(req: &SolveRequest) -> Result<Solution> {
    solve_branch_and_bound_with(req, &SolverOptions::default())
}

pub fn solve_branch_and_bound_with(req: &SolveRequest, opts: &SolverOptions) -> Result<Solution> {
    let inst = Instance::new(req)?;
    let outcome = bnb::search(&inst, opts);
    let solution = finish(
        req,
        req.plan_from_vector(&outcome.vector),
        outcome.nodes,
        outcome.complete,
    )?;
    debug_assert_eq!(
        solution.report.total_cost,
        inst.to_rational(
            inst.objective(
                &inst
                    .order
                    .iter()
                    .map(|&i| outcome.vector[i])
                    .collect::<Vec<_>>()
            )
        ),
        "scaled objective disagrees with the reference evaluation"
    );
    Ok(solution)
}

/// Services in the order the branch-and-bound search assigns them.
pub fn search_order(req: &SolveRequest) -> Result<Vec<ServiceId>> {
    let inst = Instance::new(req)?;
    Ok(inst
        .order
        .iter()
        .map(|&i| req.workflow.services()[i].id.clone())
        .collect())
}

/// Lower bound used for pruning, for regions assigned to a prefix of
/// [`search_order`]. Never exceeds the total cost of any completion.
pub fn lower_bound(req: &SolveRequest, prefix: &[LocationId]) -> Result<Rational> {
    let inst = Instance::new(req)?;
    if prefix.len() > inst.n {
        return Err(Error::InvalidRequest(format!(
            "prefix of {} regions for {} services",
            prefix.len(),
            inst.n
        )));
    }
    let assign: Vec<usize> = prefix
        .iter()
        .map(|r| {
            req.candidate_regions
                .iter()
                .position(|c| c == r)
                .ok_or_else(|| Error::UnknownLocation(r.to_string()))
        })
        .collect::<Result<_>>()?;
    let mut upto = Vec::with_capacity(assign.len());
    for t in 0..assign.len() {
        let v = inst.upto(t, assign[t], &assign, &upto);
        upto.push(v);
    }
    let mut used: Vec<usize> = assign.clone();
    used.sort_unstable();
    used.dedup();
    let allowed: Vec<usize> = if used.len() >= inst.max_engines {
        used.clone()
    } else {
        (0..inst.k).collect()
    };
    if used.len() > inst.max_engines {
        return Err(Error::InvalidRequest("prefix exceeds max engines".into()));
    }
    let mut scratch = Vec::new();
    Ok(inst.to_rational(inst.lower_bound(&assign, &upto, used.len(), &allowed, &mut scratch)))
}

/// All services on `region`, evaluated as a baseline.
pub fn solve_centralized(req: &SolveRequest, region: &LocationId) -> Result<Solution> {
    if !req.cost_matrix.contains(region.as_str()) {
        return Err(Error::UnknownLocation(region.to_string()));
    }
    let plan = DeploymentPlan::centralized(&req.workflow, region, req.overhead_rate);
    finish(req, plan, 1, false)
}

/// Cheapest single-region plan over the candidates, first candidate on ties.
pub fn best_centralized(req: &SolveRequest) -> Result<Solution> {
    req.validate()?;
    let mut best: Option<Solution> = None;
    for r in &req.candidate_regions {
        let s = solve_centralized(req, r)?;
        if best
            .as_ref()
            .is_none_or(|b| s.report.total_movement < b.report.total_movement)
        {
            best = Some(s);
        }
    }
    Ok(best.expect("validated request has candidates"))
}

/// One exact solution per overhead rate, in the given order.
pub fn sweep_overhead(
    req: &SolveRequest,
    rates: &[Rational],
    opts: &SolverOptions,
) -> Result<Vec<(Rational, Solution)>> {
    if rates.is_empty() {
        return Err(Error::EmptyRates);
    }
    rates
        .iter()
        .map(|&rate| {
            let r = req.clone().with_overhead(rate);
            solve_branch_and_bound_with(&r, opts).map(|s| (rate, s))
        })
        .collect()
}

/// Ratio of data movement times, baseline over optimized.
pub fn speedup(baseline: &Solution, optimized: &Solution) -> Result<Rational> {
    baseline
        .report
        .total_movement
        .checked_div(&optimized.report.total_movement)
        .ok_or(Error::ZeroMovement)
}
