//! Random instances and a from-scratch cost oracle shared by the integration
//! tests. The oracle recomputes the objective by plain recursion over the
//! edge list so it shares no code path with the library's evaluators.

#![allow(dead_code)]

use std::collections::HashMap;

use geoplace::optimizer::SolveRequest;
use geoplace::{
    Assignment, CostMatrix, DeploymentPlan, LocationId, Rational, Service, ServiceId, Workflow,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn loc(s: &str) -> LocationId {
    s.parse().unwrap()
}

pub fn sid(s: &str) -> ServiceId {
    s.parse().unwrap()
}

fn small_rational(rng: &mut ChaCha8Rng, max_numer: i128) -> Rational {
    Rational::new(rng.gen_range(0..=max_numer), rng.gen_range(1..=4))
}

/// Random DAG over services `s0..`, edges only from lower to higher index.
/// With `consistent`, every non-source's input size is the sum of its
/// predecessors' outputs.
pub fn random_workflow(
    rng: &mut ChaCha8Rng,
    n: usize,
    locs: &[LocationId],
    consistent: bool,
) -> Workflow {
    let mut edges = Vec::new();
    let mut preds = vec![Vec::new(); n];
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(0.35) {
                edges.push((i, j));
                preds[j].push(i);
            }
        }
    }
    let mut outs = Vec::with_capacity(n);
    let services = (0..n)
        .map(|i| {
            let out = small_rational(rng, 12);
            let mut inp = small_rational(rng, 12);
            if consistent && !preds[i].is_empty() {
                inp = preds[i].iter().map(|&p: &usize| outs[p]).sum();
            }
            outs.push(out);
            Service::new(
                sid(&format!("s{i}")),
                locs[rng.gen_range(0..locs.len())].clone(),
                inp,
                out,
            )
        })
        .collect();
    let edges = edges
        .into_iter()
        .map(|(a, b)| (sid(&format!("s{a}")), sid(&format!("s{b}"))))
        .collect();
    Workflow::checked(services, edges).unwrap()
}

/// Asymmetric matrix with random diagonal.
pub fn random_matrix(rng: &mut ChaCha8Rng, k: usize) -> CostMatrix {
    let locs = (0..k).map(|i| loc(&format!("r{i}"))).collect();
    CostMatrix::from_fn(locs, |_, _| small_rational(rng, 30)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Instance with up to 6 services and 4 regions.
pub fn oracle_sized(seed: u64) -> SolveRequest {
    let mut r = rng(seed);
    let n = r.gen_range(1..=6);
    let k = r.gen_range(1..=4);
    let cm = random_matrix(&mut r, k);
    let w = random_workflow(&mut r, n, cm.locations(), false);
    SolveRequest::new(w, cm)
}

pub fn random_assignment(r: &mut ChaCha8Rng, w: &Workflow, regions: &[LocationId]) -> Assignment {
    w.services()
        .iter()
        .map(|s| (s.id.clone(), regions[r.gen_range(0..regions.len())].clone()))
        .collect()
}

fn engine_cost(cm: &CostMatrix, a: &LocationId, b: &LocationId) -> Rational {
    if a == b {
        Rational::ZERO
    } else {
        cm.entry(a.as_str(), b.as_str()).unwrap()
    }
}

/// Completion time of every service, by direct recursion.
pub fn oracle_up_to(w: &Workflow, a: &Assignment, cm: &CostMatrix) -> HashMap<String, Rational> {
    fn go(
        s: &Service,
        w: &Workflow,
        a: &Assignment,
        cm: &CostMatrix,
        memo: &mut HashMap<String, Rational>,
    ) -> Rational {
        if let Some(&v) = memo.get(s.id.as_str()) {
            return v;
        }
        let e = &a[s.id.as_str()];
        let invo = cm.entry(e.as_str(), s.location.as_str()).unwrap() * s.in_size
            + cm.entry(s.location.as_str(), e.as_str()).unwrap() * s.out_size;
        let mut best = Rational::ZERO;
        for (p, c) in w.edges() {
            if c == &s.id {
                let ps = w.services().iter().find(|x| &x.id == p).unwrap();
                let arrive =
                    go(ps, w, a, cm, memo) + engine_cost(cm, &a[p.as_str()], e) * ps.out_size;
                if arrive > best {
                    best = arrive;
                }
            }
        }
        memo.insert(s.id.to_string(), best + invo);
        best + invo
    }
    let mut memo = HashMap::new();
    for s in w.services() {
        go(s, w, a, cm, &mut memo);
    }
    memo
}

/// (movement, total cost) of an assignment.
pub fn oracle_cost(
    w: &Workflow,
    a: &Assignment,
    cm: &CostMatrix,
    rate: Rational,
) -> (Rational, Rational) {
    let movement = oracle_up_to(w, a, cm)
        .into_values()
        .max()
        .unwrap_or(Rational::ZERO);
    let mut used: Vec<&LocationId> = a.values().collect();
    used.sort();
    used.dedup();
    let overhead = rate * Rational::from_integer(used.len().saturating_sub(1) as i128);
    (movement, movement + overhead)
}

/// Every assignment of `services` (in that order) to `regions`, as
/// region-index vectors in lexicographic order.
pub fn all_vectors(len: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = k.checked_pow(len as u32).unwrap();
    (0..total).map(move |mut x| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = x % k;
            x /= k;
        }
        v
    })
}

/// Cheapest total cost of any plan respecting `max_engines`, with the
/// lexicographically first optimal vector over workflow order.
pub fn oracle_optimum(req: &SolveRequest) -> (Vec<usize>, Rational) {
    let w = &req.workflow;
    let regions = &req.candidate_regions;
    let mut best: Option<(Vec<usize>, Rational)> = None;
    for v in all_vectors(w.len(), regions.len()) {
        let mut distinct = v.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if req.max_engines.is_some_and(|m| distinct.len() > m) {
            continue;
        }
        let a = to_assignment(w, regions, &v);
        let (_, cost) = oracle_cost(w, &a, &req.cost_matrix, req.overhead_rate);
        if best.as_ref().map_or(true, |(_, b)| cost < *b) {
            best = Some((v, cost));
        }
    }
    best.unwrap()
}

pub fn to_assignment(w: &Workflow, regions: &[LocationId], v: &[usize]) -> Assignment {
    w.services()
        .iter()
        .zip(v)
        .map(|(s, &r)| (s.id.clone(), regions[r].clone()))
        .collect()
}

pub fn plan(a: Assignment, rate: Rational) -> DeploymentPlan {
    DeploymentPlan::new(a, rate)
}
