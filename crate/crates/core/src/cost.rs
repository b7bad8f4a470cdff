//! Data movement cost of a deployment plan.
//!
//! Invoking a service ships its input from the engine to the service and its
//! output back. A service can start once every predecessor's output has
//! reached its engine; fan-in predecessors run in parallel, so the arrival
//! time is the maximum over them. The workflow's movement is the largest
//! completion time, and every engine beyond the first adds a fixed overhead.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::model::{CostMatrix, Graph, LocationId, Service, ServiceId, Workflow};
use crate::rational::{max_or, Rational};

/// Service to engine region mapping, in workflow (or file) order.
pub type Assignment = IndexMap<ServiceId, LocationId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeploymentPlan {
    pub assignment: Assignment,
    /// Penalty per engine beyond the first.
    pub overhead_rate: Rational,
}

impl DeploymentPlan {
    pub fn new(assignment: Assignment, overhead_rate: Rational) -> Self {
        DeploymentPlan {
            assignment,
            overhead_rate,
        }
    }

    /// Every service of `w` on one region.
    pub fn centralized(w: &Workflow, region: &LocationId, overhead_rate: Rational) -> Self {
        let assignment = w
            .services()
            .iter()
            .map(|s| (s.id.clone(), region.clone()))
            .collect();
        DeploymentPlan::new(assignment, overhead_rate)
    }

    pub fn engine_for(&self, service: &str) -> Option<&LocationId> {
        self.assignment.get(service)
    }

    /// Distinct regions in the image of the assignment.
    pub fn engines_used(&self) -> usize {
        self.assignment.values().collect::<HashSet<_>>().len()
    }

    /// Checks the plan covers exactly the services of `w` with known regions.
    pub fn check(&self, w: &Workflow, cm: &CostMatrix) -> Result<()> {
        for s in w.services() {
            let region = self
                .engine_for(s.id.as_str())
                .ok_or_else(|| Error::Unassigned(s.id.to_string()))?;
            if !cm.contains(region.as_str()) {
                return Err(Error::UnknownLocation(region.to_string()));
            }
        }
        if let Some(extra) = self
            .assignment
            .keys()
            .find(|k| w.index_of(k.as_str()).is_none())
        {
            return Err(Error::UnknownService(extra.to_string()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostReport {
    pub invocation_cost: IndexMap<ServiceId, Rational>,
    pub cost_up_to: IndexMap<ServiceId, Rational>,
    pub total_movement: Rational,
    pub engines_used: usize,
    pub total_overhead: Rational,
    pub total_cost: Rational,
}

/// Round trip of one invocation: input from `engine` to the service and
/// output back.
pub fn invocation_cost(svc: &Service, engine: &LocationId, cm: &CostMatrix) -> Result<Rational> {
    let to_service = cm.entry(engine.as_str(), svc.location.as_str())?;
    let to_engine = cm.entry(svc.location.as_str(), engine.as_str())?;
    Ok(to_service * svc.in_size + to_engine * svc.out_size)
}

/// Completion time of every service, in workflow order.
pub fn cost_up_to(
    w: &Workflow,
    plan: &DeploymentPlan,
    cm: &CostMatrix,
) -> Result<IndexMap<ServiceId, Rational>> {
    Ok(compute(w, plan, cm)?.1)
}

type PerService = IndexMap<ServiceId, Rational>;

/// Reference evaluation over index vectors for one workflow and matrix.
pub(crate) struct Evaluator<'a> {
    services: &'a [Service],
    graph: Graph,
    cm: &'a CostMatrix,
    home: Vec<usize>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(w: &'a Workflow, cm: &'a CostMatrix) -> Result<Self> {
        let graph = w.graph()?;
        let home = w
            .services()
            .iter()
            .map(|s| {
                cm.index_of(s.location.as_str())
                    .ok_or_else(|| Error::UnknownLocation(s.location.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(Evaluator {
            services: w.services(),
            graph,
            cm,
            home,
        })
    }

    /// Invocation cost of service `i` from the engine at matrix index `engine`.
    pub(crate) fn invocation(&self, i: usize, engine: usize) -> Rational {
        let s = &self.services[i];
        self.cm.entry_at(engine, self.home[i]) * s.in_size
            + self.cm.entry_at(self.home[i], engine) * s.out_size
    }

    /// Invocation costs and completion times, indexed like the workflow.
    /// `engines[i]` is the matrix index of service `i`'s engine.
    pub(crate) fn run(&self, engines: &[usize]) -> (Vec<Rational>, Vec<Rational>) {
        let n = self.services.len();
        let mut invo = vec![Rational::ZERO; n];
        let mut upto = vec![Rational::ZERO; n];
        for &i in &self.graph.topo {
            invo[i] = self.invocation(i, engines[i]);
            let arrival = max_or(
                self.graph.preds[i].iter().map(|&j| {
                    upto[j]
                        + self.cm.engine_cost_at(engines[j], engines[i]) * self.services[j].out_size
                }),
                Rational::ZERO,
            );
            upto[i] = arrival + invo[i];
        }
        (invo, upto)
    }

    pub(crate) fn movement(&self, engines: &[usize]) -> Rational {
        max_or(self.run(engines).1, Rational::ZERO)
    }
}

fn compute(
    w: &Workflow,
    plan: &DeploymentPlan,
    cm: &CostMatrix,
) -> Result<(PerService, PerService)> {
    let eval = Evaluator::new(w, cm)?;
    plan.check(w, cm)?;
    let engines: Vec<usize> = w
        .services()
        .iter()
        .map(|s| {
            cm.index_of(plan.engine_for(s.id.as_str()).expect("checked").as_str())
                .expect("checked")
        })
        .collect();
    let (invo, upto) = eval.run(&engines);
    let keyed = |values: Vec<Rational>| -> PerService {
        w.services()
            .iter()
            .map(|s| s.id.clone())
            .zip(values)
            .collect()
    };
    Ok((keyed(invo), keyed(upto)))
}

pub fn evaluate(w: &Workflow, plan: &DeploymentPlan, cm: &CostMatrix) -> Result<CostReport> {
    let (invocation_cost, cost_up_to) = compute(w, plan, cm)?;
    let total_movement = max_or(cost_up_to.values().copied(), Rational::ZERO);
    debug_assert_eq!(
        total_movement,
        max_or(w.sinks().iter().map(|s| cost_up_to[s]), Rational::ZERO),
        "movement over sinks must equal movement over all services"
    );
    let engines_used = plan.engines_used();
    if engines_used == 0 {
        return Err(Error::Unassigned("<empty plan>".into()));
    }
    let total_overhead = plan.overhead_rate * Rational::from_integer(engines_used as i128 - 1);
    Ok(CostReport {
        invocation_cost,
        cost_up_to,
        total_movement,
        engines_used,
        total_overhead,
        total_cost: total_movement + total_overhead,
    })
}

impl CostReport {
    /// Key/value layout: `service <id> invo <q> upto <q>` per service, then
    /// `movement`, `engines`, `overhead` and `total`.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for (id, invo) in &self.invocation_cost {
            writeln!(out, "service {id} invo {invo} upto {}", self.cost_up_to[id]).unwrap();
        }
        writeln!(out, "movement {}", self.total_movement).unwrap();
        writeln!(out, "engines {}", self.engines_used).unwrap();
        writeln!(out, "overhead {}", self.total_overhead).unwrap();
        writeln!(out, "total {}", self.total_cost).unwrap();
        out
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .invocation_cost
            .keys()
            .map(|k| k.as_str().len())
            .max()
            .unwrap_or(7)
            .max(7);
        writeln!(
            f,
            "{:<width$}  {:>12}  {:>12}",
            "service", "invocation", "cost-up-to"
        )?;
        for (id, invo) in &self.invocation_cost {
            writeln!(
                f,
                "{:<width$}  {:>12}  {:>12}",
                id.as_str(),
                invo.to_string(),
                self.cost_up_to[id].to_string()
            )?;
        }
        writeln!(f, "total movement: {}", self.total_movement)?;
        writeln!(f, "engines used:   {}", self.engines_used)?;
        writeln!(f, "total overhead: {}", self.total_overhead)?;
        write!(f, "total cost:     {}", self.total_cost)
    }
}
