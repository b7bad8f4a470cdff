//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line, even when an earlier one fails.
//!
//!     cargo test -p geoplace-core --test acceptance

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use geoplace::cost::{cost_up_to, evaluate, invocation_cost};
use geoplace::fixtures::{
    two_region_chain, SAMPLE_DEPLOYMENT, SAMPLE_EXECUTION, SAMPLE_INVOCATION,
};
use geoplace::optimizer::{
    best_centralized, lower_bound, search_order, solve_branch_and_bound, solve_brute_force,
    solve_centralized, speedup, sweep_overhead, SolveRequest, SolverOptions,
};
use geoplace::plan_io::*;
use geoplace::sim::{plan_from_solution, simulate, SimConfig};
use geoplace::workgen::{region_names, synthetic_cost_matrix, GeoModel, WorkflowGenerator};
use geoplace::{Assignment, CostMatrix, DeploymentPlan, Rational, Service, Workflow};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn overheads() -> [Rational; 3] {
    [Rational::ZERO, q("1.5"), q("40")]
}

/// Branch-and-bound agrees with brute force, plan and cost, on random
/// instances; both agree with the from-scratch oracle.
fn solver_exactness() -> Outcome {
    let mut solved = 0;
    for seed in 0..120u64 {
        let base = oracle_sized(seed);
        for (i, rate) in overheads().into_iter().enumerate() {
            let mut req = base.clone().with_overhead(rate);
            if seed % 5 == 4 && i == 0 {
                let k = req.candidate_regions.len();
                req = req.with_max_engines(Some(1 + (seed as usize / 5) % k));
            }
            let bf = solve_brute_force(&req).map_err(|e| e.to_string())?;
            let bb = solve_branch_and_bound(&req).map_err(|e| e.to_string())?;
            ensure!(bb.proven_optimal, "seed {seed}: search did not finish");
            ensure!(
                bb.plan == bf.plan && bb.report.total_cost == bf.report.total_cost,
                "seed {seed} rate {rate}: branch-and-bound {:?} ({}) vs brute force {:?} ({})",
                bb.plan.assignment,
                bb.report.total_cost,
                bf.plan.assignment,
                bf.report.total_cost
            );
            let (vector, cost) = oracle_optimum(&req);
            let expected = to_assignment(&req.workflow, &req.candidate_regions, &vector);
            ensure!(
                cost == bf.report.total_cost && expected == bf.plan.assignment,
                "seed {seed} rate {rate}: oracle optimum {expected:?} ({cost}) vs brute force {:?} ({})",
                bf.plan.assignment,
                bf.report.total_cost
            );
            solved += 1;
        }
    }
    Ok(format!("{solved} instances identical"))
}

/// With zero compute time, simulating the generated plan finishes every
/// service exactly at its cost-up-to value.
fn model_simulation_oracle() -> Outcome {
    let mut checked = 0;
    for seed in 0..150u64 {
        let mut r = rng(1_000 + seed);
        let k = r.gen_range(1..=5);
        let cm = random_matrix(&mut r, k);
        let n = r.gen_range(1..=9);
        let w = random_workflow(&mut r, n, cm.locations(), true);
        let a = random_assignment(&mut r, &w, cm.locations());
        let plan = DeploymentPlan::new(a.clone(), Rational::ZERO);
        let (_, exec, cfg) = plan_from_solution(&w, &cm, &plan, &stub_hosts(cm.locations()))
            .map_err(|e| e.to_string())?;
        let trace = simulate(&exec, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        let done = trace.service_completions(&exec);
        let expected = oracle_up_to(&w, &a, &cm);
        let upto = cost_up_to(&w, &plan, &cm).map_err(|e| e.to_string())?;
        for s in w.services() {
            let id = s.id.as_str();
            ensure!(
                done[id] == expected[id] && upto[id] == expected[id],
                "seed {seed} service {id}: simulated {} cost-up-to {} oracle {}",
                done[id],
                upto[id],
                expected[id]
            );
        }
        let movement = evaluate(&w, &plan, &cm)
            .map_err(|e| e.to_string())?
            .total_movement;
        ensure!(
            trace.makespan == movement,
            "seed {seed}: makespan {} vs movement {movement}",
            trace.makespan
        );
        checked += 1;
    }
    Ok(format!("{checked} triples exact"))
}

fn sweep_rates() -> Vec<Rational> {
    [0, 5, 10, 20, 40, 80, 160, 320, 640, 1280, 2560, 10_000]
        .into_iter()
        .map(Rational::from_integer)
        .collect()
}

/// Four generated 8 to 11 service workflows over eight clustered regions.
fn benchmark_scale() -> Outcome {
    let regions = region_names(8);
    let gen = WorkflowGenerator::new(regions.clone());
    let opts = SolverOptions::default();
    let mut speedups = Vec::new();
    let mut notes = Vec::new();
    for wf in 1..=4u64 {
        let w = gen.generate(wf).map_err(|e| e.to_string())?;
        ensure!(
            (8..=11).contains(&w.len()),
            "workflow {wf} has {} services",
            w.len()
        );
        let cm = synthetic_cost_matrix(wf, &regions, &GeoModel::default());
        let req = SolveRequest::new(w.clone(), cm);

        let sweep = sweep_overhead(&req, &sweep_rates(), &opts).map_err(|e| e.to_string())?;
        let mut shape = Vec::new();
        for pair in sweep.windows(2) {
            let (a, b) = (&pair[0].1, &pair[1].1);
            ensure!(
                a.proven_optimal && b.proven_optimal,
                "workflow {wf}: search hit the node budget"
            );
            ensure!(
                b.report.engines_used <= a.report.engines_used,
                "workflow {wf}: engines rose from {} to {} between rates {} and {}",
                a.report.engines_used,
                b.report.engines_used,
                pair[0].0,
                pair[1].0
            );
            ensure!(
                b.report.total_movement >= a.report.total_movement,
                "workflow {wf}: movement fell from {} to {} between rates {} and {}",
                a.report.total_movement,
                b.report.total_movement,
                pair[0].0,
                pair[1].0
            );
        }
        for (rate, s) in &sweep {
            shape.push(format!(
                "{rate}:{}e/{}",
                s.report.engines_used, s.report.total_movement
            ));
        }

        let optimum = &sweep[0].1;
        for r in &regions {
            let c = solve_centralized(&req, r).map_err(|e| e.to_string())?;
            ensure!(
                optimum.report.total_movement < c.report.total_movement,
                "workflow {wf}: optimum movement {} not below centralized {r} at {}",
                optimum.report.total_movement,
                c.report.total_movement
            );
        }
        let best = best_centralized(&req).map_err(|e| e.to_string())?;
        let s = speedup(&best, optimum).map_err(|e| e.to_string())?;
        ensure!(s >= Rational::ONE, "workflow {wf}: speedup {s} below 1");
        speedups.push(s.to_f64());
        notes.push(format!("wf{wf} n={} [{}]", w.len(), shape.join(" ")));
    }
    for n in &notes {
        println!("    {n}");
    }
    let max = speedups.iter().cloned().fold(0.0, f64::max);
    let listed = speedups
        .iter()
        .map(|s| format!("{s:.2}"))
        .collect::<Vec<_>>()
        .join(", ");
    ensure!(max >= 1.3, "no speedup reaches 1.3: {listed}");
    Ok(format!("speedups over best single region: {listed}"))
}

fn token() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,7}"
}

fn literal_text() -> impl Strategy<Value = String> {
    "[A-Za-z0-9_.:/-]{1,8}"
}

/// (is literal, literal text, reference text, earlier-output pick)
fn operand_seed() -> impl Strategy<Value = (u8, String, String, usize)> {
    (0u8..3, literal_text(), token(), any::<usize>())
}

fn operand(seed: &(u8, String, String, usize), earlier: &[String]) -> Operand {
    match seed.0 {
        0 => Operand::literal(seed.1.clone()),
        2 if !earlier.is_empty() => Operand::reference(earlier[seed.3 % earlier.len()].clone()),
        _ => Operand::reference(format!("ext_{}", seed.2)),
    }
}

fn invocation_strategy() -> impl Strategy<Value = InvocationDescription> {
    let step = (
        token(),
        prop::collection::vec((operand_seed(), operand_seed()), 1..4),
        token(),
    );
    prop::collection::vec(step, 0..8).prop_map(|steps| {
        let mut outputs: Vec<String> = Vec::new();
        let mut out = Vec::new();
        for (i, (service, pairs, tail)) in steps.into_iter().enumerate() {
            let inputs = pairs
                .iter()
                .map(|(p, v)| Pair::new(operand(p, &outputs), operand(v, &outputs)))
                .collect();
            let output = format!("o{i}_{tail}");
            outputs.push(output.clone());
            out.push(InvocationStep {
                service,
                inputs,
                output,
            });
        }
        InvocationDescription { steps: out }
    })
}

fn deployment_strategy() -> impl Strategy<Value = Assignment> {
    prop::collection::vec((token(), token()), 0..10).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (s, r))| (sid(&format!("{s}{i}")), loc(&r)))
            .collect()
    })
}

fn execution_strategy() -> impl Strategy<Value = ExecutionPlan> {
    let host = (
        token(),
        token(),
        prop::option::of("[a-z0-9][a-z0-9._-]{0,11}"),
    );
    let step = (
        any::<bool>(),
        any::<usize>(),
        any::<usize>(),
        token(),
        prop::collection::vec((operand_seed(), operand_seed()), 1..3),
        token(),
        token(),
    );
    (
        prop::collection::vec(host, 1..4),
        prop::collection::vec((token(), any::<usize>()), 1..4),
        prop::collection::vec(step, 0..10),
    )
        .prop_map(|(hosts, engines, steps)| {
            let mut plan = ExecutionPlan::default();
            for (i, (provider, user, address)) in hosts.iter().enumerate() {
                plan.hosts.push(Host {
                    alias: format!("h{i}"),
                    provider: provider.clone(),
                    user: user.clone(),
                    address: address.clone(),
                });
            }
            for (i, (app, h)) in engines.iter().enumerate() {
                plan.engines.push(EngineDecl {
                    alias: format!("e{i}"),
                    app: app.clone(),
                });
                plan.deployments.push(Deployment {
                    engine: format!("e{i}"),
                    host: format!("h{}", h % hosts.len()),
                });
            }
            let m = engines.len();
            for (transfer, a, b, name, pairs, out, src) in steps {
                let from = format!("e{}", a % m);
                plan.steps.push(if transfer {
                    Step::Transfer(Transfer {
                        from,
                        to: format!("e{}", b % m),
                        key: name,
                        source: src,
                        ack: out,
                    })
                } else {
                    Step::Invocation(Invocation {
                        engine: from,
                        service: name,
                        inputs: pairs
                            .iter()
                            .map(|(p, v)| Pair::new(operand(p, &[]), operand(v, &[])))
                            .collect(),
                        output: out,
                    })
                });
            }
            plan
        })
}

fn round_trips<T, S>(
    strategy: S,
    parse: impl Fn(&str) -> geoplace::Result<T>,
    ser: impl Fn(&T) -> String,
) -> Result<(), String>
where
    T: std::fmt::Debug + PartialEq,
    S: Strategy<Value = T>,
{
    let mut runner = TestRunner::new(Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |x| {
            let text = ser(&x);
            let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
            prop_assert_eq!(back, x);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn format_fidelity() -> Outcome {
    let inv = parse_invocation_description(SAMPLE_INVOCATION).map_err(|e| e.to_string())?;
    ensure!(
        inv.steps.len() == 2,
        "invocation: {} steps",
        inv.steps.len()
    );
    ensure!(
        inv.steps[0].inputs
            == [Pair::new(
                Operand::literal("param_1"),
                Operand::literal("0")
            )]
            && inv.steps[0].output == "value_2"
            && inv.steps[1].inputs
                == [Pair::new(
                    Operand::literal("param_2"),
                    Operand::reference("value_2")
                )]
            && inv.steps[1].output == "value_3",
        "invocation structure: {inv:?}"
    );

    let dep = parse_deployment_plan(SAMPLE_DEPLOYMENT).map_err(|e| e.to_string())?;
    let pairs: Vec<_> = dep.iter().map(|(s, r)| (s.as_str(), r.as_str())).collect();
    ensure!(
        pairs == [("ws_1", "region_1"), ("ws_2", "region_2")],
        "deployment: {pairs:?}"
    );

    let exec = parse_execution_plan(SAMPLE_EXECUTION).map_err(|e| e.to_string())?;
    ensure!(
        exec.hosts.len() == 2
            && exec.engines.len() == 2
            && exec.deployments.len() == 2
            && exec.steps.len() == 3,
        "execution plan counts: {exec:?}"
    );
    ensure!(
        exec.hosts[1].address.is_none(),
        "`_` address should be unknown"
    );
    ensure!(exec.transfers().count() == 1, "execution plan transfers");

    let mut hosts = stub_hosts(dep.values());
    hosts.get_mut("region_1").unwrap().address = Some("region_1_ip".into());
    let generated = generate_execution_plan(&inv, &dep, &hosts).map_err(|e| e.to_string())?;
    ensure!(
        generated.hosts.len() == 2
            && generated.engines.len() == 2
            && generated.deployments.len() == 2
            && generated.invocations().count() == 2
            && generated.transfers().count() == 1,
        "generated structure: {generated:?}"
    );
    ensure!(
        generated.hosts == exec.hosts
            && generated.engines == exec.engines
            && generated.deployments == exec.deployments,
        "generated declarations differ from the sample"
    );
    let t = generated.transfers().next().unwrap();
    ensure!(
        (
            t.from.as_str(),
            t.to.as_str(),
            t.key.as_str(),
            t.source.as_str(),
            t.ack.as_str()
        ) == ("eng_1", "eng_2", "value_2", "value_2", "ack_1"),
        "generated transfer {t:?}"
    );
    let reparsed =
        parse_execution_plan(&serialize_execution_plan(&generated)).map_err(|e| e.to_string())?;
    ensure!(
        reparsed == generated,
        "generated plan does not reparse identically"
    );

    round_trips(
        invocation_strategy(),
        parse_invocation_description,
        serialize_invocation_description,
    )
    .map_err(|e| format!("invocation round trip: {e}"))?;
    round_trips(
        deployment_strategy(),
        parse_deployment_plan,
        serialize_deployment_plan,
    )
    .map_err(|e| format!("deployment round trip: {e}"))?;
    round_trips(
        execution_strategy(),
        parse_execution_plan,
        serialize_execution_plan,
    )
    .map_err(|e| format!("execution round trip: {e}"))?;
    Ok("samples parsed, generated plan matches, 3 x 100 round trips".into())
}

fn svc(id: &str, at: &str, inp: &str, out: &str) -> Service {
    Service::new(sid(id), loc(at), q(inp), q(out))
}

fn one_region(cost: &str) -> CostMatrix {
    CostMatrix::new(vec![loc("r")], vec![vec![q(cost)]]).unwrap()
}

fn hand_examples() -> Outcome {
    let mut n = 0;
    let mut check = |what: &str, got: Rational, want: &str| -> Result<(), String> {
        n += 1;
        ensure!(got == q(want), "{what}: got {got}, expected {want}");
        Ok(())
    };

    // Invocation cost.
    let unit = one_region("1");
    check(
        "invocation, unit costs",
        invocation_cost(&svc("s", "r", "1", "2"), &loc("r"), &unit).unwrap(),
        "3",
    )?;
    let far = CostMatrix::new(
        vec![loc("e"), loc("x")],
        vec![vec![q("9"), q("2")], vec![q("3"), q("9")]],
    )
    .unwrap();
    check(
        "invocation, zero data",
        invocation_cost(&svc("s", "x", "0", "0"), &loc("e"), &far).unwrap(),
        "0",
    )?;
    check(
        "invocation, asymmetric",
        invocation_cost(&svc("s", "x", "3", "5"), &loc("e"), &far).unwrap(),
        "21",
    )?;

    // Cost up to: co-located chain with invocation costs 3 and 15.
    let chain = Workflow::checked(
        vec![svc("s1", "r", "1", "2"), svc("s2", "r", "5", "10")],
        vec![(sid("s1"), sid("s2"))],
    )
    .unwrap();
    let co = DeploymentPlan::centralized(&chain, &loc("r"), Rational::ZERO);
    let upto = cost_up_to(&chain, &co, &unit).unwrap();
    check("source cost-up-to", upto["s1"], "3")?;
    check("co-located chain", upto["s2"], "18")?;

    // Fan-in with invocation costs 4, 6, 2.
    let fan = Workflow::checked(
        vec![
            svc("s1", "r", "2", "2"),
            svc("s2", "r", "3", "3"),
            svc("s3", "r", "1", "1"),
        ],
        vec![(sid("s1"), sid("s3")), (sid("s2"), sid("s3"))],
    )
    .unwrap();
    let fan_plan = DeploymentPlan::centralized(&fan, &loc("r"), Rational::ZERO);
    check(
        "fan-in",
        cost_up_to(&fan, &fan_plan, &unit).unwrap()["s3"],
        "8",
    )?;

    // Single service with overhead 7.
    let single = Workflow::checked(vec![svc("s", "r", "2", "3")], vec![]).unwrap();
    let report = evaluate(
        &single,
        &DeploymentPlan::centralized(&single, &loc("r"), q("7")),
        &unit,
    )
    .unwrap();
    ensure!(
        report.engines_used == 1,
        "single service uses {} engines",
        report.engines_used
    );
    check("single service overhead", report.total_overhead, "0")?;
    check(
        "single service total",
        report.total_cost,
        &report.total_movement.to_string(),
    )?;

    // Two-region chain.
    let (w, cm) = two_region_chain();
    let split: Assignment = [(sid("s1"), loc("r1")), (sid("s2"), loc("r2"))]
        .into_iter()
        .collect();
    let r0 = evaluate(&w, &DeploymentPlan::new(split.clone(), Rational::ZERO), &cm).unwrap();
    check("split invocation s1", r0.invocation_cost["s1"], "3")?;
    check("split invocation s2", r0.invocation_cost["s2"], "3")?;
    check("split movement", r0.total_movement, "10")?;
    check("split total", r0.total_cost, "10")?;
    let r10 = evaluate(&w, &DeploymentPlan::new(split, q("10")), &cm).unwrap();
    check("split total at overhead 10", r10.total_cost, "20")?;
    check("split overhead at 10", r10.total_overhead, "10")?;

    let req = SolveRequest::new(w.clone(), cm.clone());
    let flat = solve_brute_force(&req).unwrap();
    ensure!(
        flat.plan
            .assignment
            .values()
            .map(|l| l.as_str())
            .collect::<Vec<_>>()
            == ["r1", "r2"],
        "optimum without overhead: {:?}",
        flat.plan.assignment
    );
    check("optimum without overhead", flat.report.total_cost, "10")?;
    for r in ["r1", "r2"] {
        let c = solve_centralized(&req, &loc(r)).unwrap();
        check("single-region plan", c.report.total_cost, "18")?;
    }
    let taxed = req.clone().with_overhead(q("10"));
    for sol in [
        solve_brute_force(&taxed).unwrap(),
        solve_branch_and_bound(&taxed).unwrap(),
    ] {
        ensure!(
            sol.plan
                .assignment
                .values()
                .map(|l| l.as_str())
                .collect::<Vec<_>>()
                == ["r1", "r1"],
            "optimum at overhead 10: {:?}",
            sol.plan.assignment
        );
        check("optimum at overhead 10", sol.report.total_cost, "18")?;
        check(
            "overhead of the flipped plan",
            sol.report.total_overhead,
            "0",
        )?;
    }
    let best = best_centralized(&req).unwrap();
    check("speedup", speedup(&best, &flat).unwrap(), "1.8")?;
    check(
        "speedup against itself",
        speedup(&flat, &flat).unwrap(),
        "1",
    )?;

    // Simulated sample plan with unit costs.
    let inv = parse_invocation_description(SAMPLE_INVOCATION).unwrap();
    let dep = parse_deployment_plan(SAMPLE_DEPLOYMENT).unwrap();
    let exec = generate_execution_plan(&inv, &dep, &stub_hosts(dep.values())).unwrap();
    let cfg = SimConfig {
        cost_matrix: CostMatrix::from_fn(vec![loc("region_1"), loc("region_2")], |_, _| {
            Rational::ONE
        })
        .unwrap(),
        data_sizes: [("value_2", Rational::ONE), ("value_3", Rational::ONE)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        compute_time: BTreeMap::new(),
        service_locations: [("ws_1", loc("region_1")), ("ws_2", loc("region_2"))]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    };
    let trace = simulate(&exec, &cfg).unwrap();
    check("sample ws_1 done", trace.completion[0], "1")?;
    check("sample transfer done", trace.completion[1], "2")?;
    check("sample makespan", trace.makespan, "4")?;
    Ok(format!("{n} hand-derived values exact"))
}

/// Bound on random prefixes never exceeds the best completion, found by
/// enumerating every completion with the oracle.
fn lower_bound_admissibility() -> Outcome {
    let mut trials = 0;
    let mut tight = 0;
    let mut seed = 0u64;
    while trials < 1000 {
        seed += 1;
        let mut r = rng(50_000 + seed);
        let mut req = oracle_sized(seed).with_overhead(overheads()[(seed % 3) as usize]);
        let k = req.candidate_regions.len();
        if seed % 4 == 0 {
            req = req.with_max_engines(Some(r.gen_range(1..=k)));
        }
        let max = req.max_engines.unwrap_or(k);
        let order = search_order(&req).map_err(|e| e.to_string())?;
        let n = order.len();
        let len = r.gen_range(0..=n);
        let mut prefix: Vec<usize> = Vec::with_capacity(len);
        for _ in 0..len {
            let mut used = prefix.clone();
            used.sort_unstable();
            used.dedup();
            let pick = if used.len() >= max {
                used[r.gen_range(0..used.len())]
            } else {
                r.gen_range(0..k)
            };
            prefix.push(pick);
        }
        let regions: Vec<_> = prefix
            .iter()
            .map(|&i| req.candidate_regions[i].clone())
            .collect();
        let bound = lower_bound(&req, &regions).map_err(|e| format!("seed {seed}: {e}"))?;

        let mut best: Option<Rational> = None;
        for rest in all_vectors(n - len, k) {
            let full: Vec<usize> = prefix.iter().chain(&rest).copied().collect();
            let mut used = full.clone();
            used.sort_unstable();
            used.dedup();
            if used.len() > max {
                continue;
            }
            let a: Assignment = req
                .workflow
                .services()
                .iter()
                .map(|s| {
                    let t = order.iter().position(|o| o == &s.id).unwrap();
                    (s.id.clone(), req.candidate_regions[full[t]].clone())
                })
                .collect();
            let (_, cost) = oracle_cost(&req.workflow, &a, &req.cost_matrix, req.overhead_rate);
            if best.map_or(true, |b| cost < b) {
                best = Some(cost);
            }
        }
        let best = best.ok_or_else(|| format!("seed {seed}: no feasible completion"))?;
        ensure!(
            bound <= best,
            "seed {seed} prefix {prefix:?}: bound {bound} exceeds best completion {best}"
        );
        if len == n {
            ensure!(
                bound == best,
                "seed {seed}: bound {bound} at a leaf differs from its cost {best}"
            );
            tight += 1;
        }
        trials += 1;
    }
    Ok(format!(
        "{trials} prefixes admissible, {tight} full prefixes tight"
    ))
}

fn run(id: u32, title: &str, limit: Duration, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let took = start.elapsed();
    let result = match result {
        Ok(_) if took > limit => Err(format!("took {took:.1?}, limit {limit:?}")),
        other => other,
    };
    match &result {
        Ok(detail) => println!("criterion {id} PASS  {title} ({took:.2?}): {detail}"),
        Err(why) => println!("criterion {id} FAIL  {title} ({took:.2?}): {why}"),
    }
    result.is_ok()
}

fn main() {
    let results = [
        run(
            1,
            "solver exactness",
            Duration::from_secs(60),
            solver_exactness,
        ),
        run(
            2,
            "model and simulation agree",
            Duration::from_secs(30),
            model_simulation_oracle,
        ),
        run(
            3,
            "benchmark-scale reproduction",
            Duration::from_secs(300),
            benchmark_scale,
        ),
        run(
            4,
            "format fidelity",
            Duration::from_secs(60),
            format_fidelity,
        ),
        run(
            5,
            "hand-derived examples",
            Duration::from_secs(10),
            hand_examples,
        ),
        run(
            6,
            "lower-bound admissibility",
            Duration::from_secs(60),
            lower_bound_admissibility,
        ),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
