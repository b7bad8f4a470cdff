use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;

use super::{LocationId, ServiceId};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A web service with its home region and relative input/output data sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Service {
    pub id: ServiceId,
    pub location: LocationId,
    pub in_size: Rational,
    pub out_size: Rational,
}

impl Service {
    pub fn new(id: ServiceId, location: LocationId, in_size: Rational, out_size: Rational) -> Self {
        Service {
            id,
            location,
            in_size,
            out_size,
        }
    }
}

/// A broken workflow invariant, reported by [`Workflow::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    DuplicateService(ServiceId),
    UnknownService {
        producer: ServiceId,
        consumer: ServiceId,
        missing: ServiceId,
    },
    SelfEdge(ServiceId),
    Cycle(Vec<ServiceId>),
    NegativeSize(ServiceId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "workflow has no services"),
            Violation::DuplicateService(s) => write!(f, "service {s} declared more than once"),
            Violation::UnknownService {
                producer,
                consumer,
                missing,
            } => write!(
                f,
                "edge {producer} -> {consumer} names undeclared service {missing}"
            ),
            Violation::SelfEdge(s) => write!(f, "self-edge on {s}"),
            Violation::Cycle(members) => {
                let names: Vec<&str> = members.iter().map(|s| s.as_str()).collect();
                write!(f, "cycle through {}", names.join(" -> "))
            }
            Violation::NegativeSize(s) => write!(f, "service {s} has a negative data size"),
        }
    }
}

/// Index-based adjacency of a valid workflow.
#[derive(Clone, Debug)]
pub(crate) struct Graph {
    pub preds: Vec<Vec<usize>>,
    /// Topological order; among ready services the earliest declared goes first.
    pub topo: Vec<usize>,
}

/// A DAG of services. Edges `(producer, consumer)` carry the producer's output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workflow {
    services: Vec<Service>,
    edges: Vec<(ServiceId, ServiceId)>,
}

impl Workflow {
    /// Builds a workflow without checking it; duplicate edges collapse into one.
    pub fn new(services: Vec<Service>, edges: Vec<(ServiceId, ServiceId)>) -> Self {
        let mut seen = HashSet::new();
        let edges = edges
            .into_iter()
            .filter(|e| seen.insert(e.clone()))
            .collect();
        Workflow { services, edges }
    }

    /// Builds a workflow and rejects it unless [`validate`](Self::validate) is clean.
    pub fn checked(services: Vec<Service>, edges: Vec<(ServiceId, ServiceId)>) -> Result<Self> {
        let w = Workflow::new(services, edges);
        let violations = w.validate();
        if violations.is_empty() {
            Ok(w)
        } else {
            Err(Error::InvalidWorkflow(violations))
        }
    }

    pub fn services(&self) -> &[Service] {
        &self.services
    }

    pub fn edges(&self) -> &[(ServiceId, ServiceId)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.services.len()
    }

    pub fn is_empty(&self) -> bool {
        self.services.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.services.iter().position(|s| s.id.as_str() == id)
    }

    pub fn service(&self, id: &str) -> Option<&Service> {
        self.services.iter().find(|s| s.id.as_str() == id)
    }

    /// Every violated invariant; empty iff the workflow is a well-formed DAG.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.services.is_empty() {
            out.push(Violation::Empty);
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, s) in self.services.iter().enumerate() {
            if index.insert(s.id.as_str(), i).is_some() {
                out.push(Violation::DuplicateService(s.id.clone()));
            }
            if s.in_size.is_negative() || s.out_size.is_negative() {
                out.push(Violation::NegativeSize(s.id.clone()));
            }
        }

        let mut succs = vec![Vec::new(); self.services.len()];
        for (p, c) in &self.edges {
            if p == c {
                out.push(Violation::SelfEdge(p.clone()));
                continue;
            }
            let mut ok = true;
            for end in [p, c] {
                if !index.contains_key(end.as_str()) {
                    out.push(Violation::UnknownService {
                        producer: p.clone(),
                        consumer: c.clone(),
                        missing: end.clone(),
                    });
                    ok = false;
                }
            }
            if ok {
                succs[index[p.as_str()]].push(index[c.as_str()]);
            }
        }

        for cycle in find_cycles(&succs) {
            out.push(Violation::Cycle(
                cycle
                    .into_iter()
                    .map(|i| self.services[i].id.clone())
                    .collect(),
            ));
        }
        out
    }

    /// `p(s)`: the services producing inputs for `id`.
    pub fn predecessors(&self, id: &str) -> Result<BTreeSet<ServiceId>> {
        if self.index_of(id).is_none() {
            return Err(Error::UnknownService(id.to_string()));
        }
        Ok(self
            .edges
            .iter()
            .filter(|(_, c)| c.as_str() == id)
            .map(|(p, _)| p.clone())
            .collect())
    }

    /// Services with no outgoing edge.
    pub fn sinks(&self) -> BTreeSet<ServiceId> {
        let producers: HashSet<&str> = self.edges.iter().map(|(p, _)| p.as_str()).collect();
        self.services
            .iter()
            .filter(|s| !producers.contains(s.id.as_str()))
            .map(|s| s.id.clone())
            .collect()
    }

    pub fn topological_order(&self) -> Result<Vec<ServiceId>> {
        let g = self.graph()?;
        Ok(g.topo
            .iter()
            .map(|&i| self.services[i].id.clone())
            .collect())
    }

    pub(crate) fn graph(&self) -> Result<Graph> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidWorkflow(violations));
        }
        let n = self.services.len();
        let index: HashMap<&str, usize> = self
            .services
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.as_str(), i))
            .collect();
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        for (p, c) in &self.edges {
            let (p, c) = (index[p.as_str()], index[c.as_str()]);
            preds[c].push(p);
            succs[p].push(c);
        }
        for list in preds.iter_mut().chain(succs.iter_mut()) {
            list.sort_unstable();
        }

        let mut indegree: Vec<usize> = preds.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(Reverse(i)) = ready.pop() {
            topo.push(i);
            for &j in &succs[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(Reverse(j));
                }
            }
        }
        debug_assert_eq!(topo.len(), n);
        Ok(Graph { preds, topo })
    }

    pub(crate) fn locations(&self) -> impl Iterator<Item = &LocationId> {
        self.services.iter().map(|s| &s.location)
    }
}

/// One representative cycle per strongly connected component with more than
/// one node, found by iterative DFS.
fn find_cycles(succs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = succs.len();
    let mut mark = vec![Mark::New; n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut in_reported = vec![false; n];

    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        mark[root] = Mark::Active;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < succs[node].len() {
                let child = succs[node][*next];
                *next += 1;
                match mark[child] {
                    Mark::New => {
                        mark[child] = Mark::Active;
                        stack.push((child, 0));
                    }
                    Mark::Active => {
                        let start = stack.iter().position(|&(v, _)| v == child).unwrap();
                        let cycle: Vec<usize> = stack[start..].iter().map(|&(v, _)| v).collect();
                        if !cycle.iter().any(|&v| in_reported[v]) {
                            for &v in &cycle {
                                in_reported[v] = true;
                            }
                            cycles.push(cycle);
                        }
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    cycles
}
