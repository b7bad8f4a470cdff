//! Discrete-event replay of an execution plan.
//!
//! Engines fire a step as soon as every datum it reads is present in their
//! store, with no limit on concurrent steps. An invocation ships its reference
//! inputs to the service, optionally computes, and ships the output back; a
//! transfer ships one datum to another engine. Data that no step produces is
//! external input, present on every engine at time zero. Events at equal
//! times are handled in step order.
//!
//! With zero compute time, each invocation completes exactly at the cost
//! model's cost-up-to value for its service.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::fmt::Write;

use indexmap::IndexMap;

use crate::cost::DeploymentPlan;
use crate::error::{Error, Result};
use crate::model::{CostMatrix, LocationId, Workflow};
use crate::plan_io::{
    generate_execution_plan, ExecutionPlan, HostRecord, InvocationDescription, InvocationStep,
    Operand, Pair, Step,
};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub cost_matrix: CostMatrix,
    /// Size of every datum read, transferred or produced.
    pub data_sizes: BTreeMap<String, Rational>,
    /// Per-service computation time; absent means zero.
    pub compute_time: BTreeMap<String, Rational>,
    /// Region each invoked service lives in.
    pub service_locations: BTreeMap<String, LocationId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimTrace {
    /// Per step, the time its last input became available.
    pub ready: Vec<Rational>,
    pub completion: Vec<Rational>,
    pub makespan: Rational,
}

impl SimTrace {
    /// `step <index> ready <q> done <q>` per step, then `makespan <q>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, (r, c)) in self.ready.iter().zip(&self.completion).enumerate() {
            writeln!(out, "step {i} ready {r} done {c}").unwrap();
        }
        writeln!(out, "makespan {}", self.makespan).unwrap();
        out
    }

    /// Completion time of each invocation, keyed by service name.
    pub fn service_completions(&self, plan: &ExecutionPlan) -> IndexMap<String, Rational> {
        plan.steps
            .iter()
            .zip(&self.completion)
            .filter_map(|(s, &t)| match s {
                Step::Invocation(inv) => Some((inv.service.clone(), t)),
                Step::Transfer(_) => None,
            })
            .collect()
    }
}

fn size_of(cfg: &SimConfig, name: &str) -> Result<Rational> {
    cfg.data_sizes
        .get(name)
        .copied()
        .ok_or_else(|| Error::MissingSize(name.to_string()))
}

struct Prepared {
    engine: usize,
    needs: Vec<String>,
    duration: Rational,
}

fn prepare(plan: &ExecutionPlan, cfg: &SimConfig) -> Result<Vec<Prepared>> {
    let cm = &cfg.cost_matrix;
    let region = |engine: &str| -> Result<usize> {
        let host = plan.host_of(engine).ok_or_else(|| {
            Error::invalid(
                "execution plan",
                format!("engine `{engine}` is not deployed"),
            )
        })?;
        cm.index_of(host)
            .ok_or_else(|| Error::UnknownLocation(host.to_string()))
    };
    let engine_index: HashMap<&str, usize> = plan
        .engines
        .iter()
        .enumerate()
        .map(|(i, e)| (e.alias.as_str(), i))
        .collect();
    let engine_of = |alias: &str| -> Result<usize> {
        engine_index
            .get(alias)
            .copied()
            .ok_or_else(|| Error::invalid("execution plan", format!("undeclared engine `{alias}`")))
    };

    plan.steps
        .iter()
        .map(|step| match step {
            Step::Invocation(inv) => {
                let e = region(&inv.engine)?;
                let home = cfg
                    .service_locations
                    .get(&inv.service)
                    .ok_or_else(|| Error::UnknownService(inv.service.clone()))?;
                let home = cm
                    .index_of(home.as_str())
                    .ok_or_else(|| Error::UnknownLocation(home.to_string()))?;
                let mut in_total = Rational::ZERO;
                let mut needs: Vec<String> = Vec::new();
                for r in inv.inputs.iter().flat_map(Pair::references) {
                    in_total += size_of(cfg, r)?;
                    if !needs.iter().any(|n| n == r) {
                        needs.push(r.to_string());
                    }
                }
                let out = size_of(cfg, &inv.output)?;
                let compute = cfg
                    .compute_time
                    .get(&inv.service)
                    .copied()
                    .unwrap_or_default();
                Ok(Prepared {
                    engine: engine_of(&inv.engine)?,
                    needs,
                    duration: cm.entry_at(e, home) * in_total
                        + compute
                        + cm.entry_at(home, e) * out,
                })
            }
            Step::Transfer(t) => {
                let hop = cm.engine_cost_at(region(&t.from)?, region(&t.to)?);
                Ok(Prepared {
                    engine: engine_of(&t.from)?,
                    needs: vec![t.source.clone()],
                    duration: hop * size_of(cfg, &t.source)?,
                })
            }
        })
        .collect()
}

pub fn simulate(plan: &ExecutionPlan, cfg: &SimConfig) -> Result<SimTrace> {
    let steps = prepare(plan, cfg)?;
    let engine_index: HashMap<&str, usize> = plan
        .engines
        .iter()
        .enumerate()
        .map(|(i, e)| (e.alias.as_str(), i))
        .collect();

    // Names some step delivers somewhere; everything else is external input.
    let mut produced: HashSet<&str> = HashSet::new();
    for s in &plan.steps {
        match s {
            Step::Invocation(inv) => {
                produced.insert(&inv.output);
            }
            Step::Transfer(t) => {
                produced.insert(&t.key);
                produced.insert(&t.ack);
            }
        }
    }

    let n = steps.len();
    let mut available: HashMap<(usize, &str), Rational> = HashMap::new();
    let mut waiting: HashMap<(usize, &str), Vec<usize>> = HashMap::new();
    let mut pending = vec![0usize; n];
    let mut ready = vec![Rational::ZERO; n];
    let mut completion: Vec<Option<Rational>> = vec![None; n];
    let mut queue: BinaryHeap<Reverse<(Rational, usize)>> = BinaryHeap::new();

    for (i, s) in steps.iter().enumerate() {
        for name in &s.needs {
            if produced.contains(name.as_str()) {
                pending[i] += 1;
                waiting
                    .entry((s.engine, name.as_str()))
                    .or_default()
                    .push(i);
            }
        }
        if pending[i] == 0 {
            queue.push(Reverse((s.duration, i)));
        }
    }

    while let Some(Reverse((t, i))) = queue.pop() {
        completion[i] = Some(t);
        let mut delivered: Vec<(usize, &str)> = Vec::with_capacity(2);
        match &plan.steps[i] {
            Step::Invocation(inv) => delivered.push((steps[i].engine, inv.output.as_str())),
            Step::Transfer(tr) => {
                delivered.push((engine_index[tr.to.as_str()], tr.key.as_str()));
                delivered.push((steps[i].engine, tr.ack.as_str()));
            }
        }
        for key in delivered {
            if available.contains_key(&key) {
                continue;
            }
            available.insert(key, t);
            for j in waiting.remove(&key).unwrap_or_default() {
                pending[j] -= 1;
                if pending[j] == 0 {
                    // Events pop in time order, so the last arrival is now.
                    ready[j] = t;
                    queue.push(Reverse((t + steps[j].duration, j)));
                }
            }
        }
    }

    let blocked: Vec<usize> = (0..n).filter(|&i| completion[i].is_none()).collect();
    if !blocked.is_empty() {
        return Err(Error::Deadlock { blocked });
    }
    let completion: Vec<Rational> = completion.into_iter().map(Option::unwrap).collect();
    let makespan = completion.iter().copied().max().unwrap_or_default();
    Ok(SimTrace {
        ready,
        completion,
        makespan,
    })
}

/// Reference name for a service's output.
pub fn output_ref(service: &str) -> String {
    format!("{service}_out")
}

/// Reference name for a source service's external input.
pub fn input_ref(service: &str) -> String {
    format!("{service}_in")
}

/// Synthesizes the scripts for running `w` under `plan`.
///
/// Each service becomes one invocation, in topological order. A service
/// reads every predecessor's output; a source reads one external input of
/// its declared input size. Non-source services must declare an input size
/// equal to the summed output sizes of their predecessors.
pub fn plan_from_solution(
    w: &Workflow,
    cm: &CostMatrix,
    plan: &DeploymentPlan,
    hosts: &BTreeMap<LocationId, HostRecord>,
) -> Result<(InvocationDescription, ExecutionPlan, SimConfig)> {
    plan.check(w, cm)?;
    let mut data_sizes = BTreeMap::new();
    let mut steps = Vec::with_capacity(w.len());
    for id in w.topological_order()? {
        let svc = w
            .service(id.as_str())
            .expect("topological order lists declared services");
        let preds = w.predecessors(id.as_str())?;
        let inputs: Vec<Pair> = if preds.is_empty() {
            let name = input_ref(id.as_str());
            data_sizes.insert(name.clone(), svc.in_size);
            vec![Pair::new(
                Operand::literal("input"),
                Operand::reference(name),
            )]
        } else {
            let consumed: Rational = preds
                .iter()
                .map(|p| w.service(p.as_str()).expect("validated").out_size)
                .sum();
            if consumed != svc.in_size {
                return Err(Error::InconsistentInputSize {
                    service: id.to_string(),
                    declared: svc.in_size.to_string(),
                    consumed: consumed.to_string(),
                });
            }
            let mut preds: Vec<_> = preds.into_iter().collect();
            preds.sort_by_key(|p| w.index_of(p.as_str()));
            preds
                .iter()
                .map(|p| {
                    Pair::new(
                        Operand::literal(format!("from_{p}")),
                        Operand::reference(output_ref(p.as_str())),
                    )
                })
                .collect()
        };
        data_sizes.insert(output_ref(id.as_str()), svc.out_size);
        steps.push(InvocationStep {
            service: id.to_string(),
            inputs,
            output: output_ref(id.as_str()),
        });
    }
    let inv = InvocationDescription { steps };
    let exec = generate_execution_plan(&inv, &plan.assignment, hosts)?;
    let cfg = SimConfig {
        cost_matrix: cm.clone(),
        data_sizes,
        compute_time: BTreeMap::new(),
        service_locations: w
            .services()
            .iter()
            .map(|s| (s.id.to_string(), s.location.clone()))
            .collect(),
    };
    Ok((inv, exec, cfg))
}
