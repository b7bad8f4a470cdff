//! Benchmark workflows built from linear, fan-in and fan-out fragments, plus
//! synthetic region-to-region cost matrices and file loaders.

use std::ops::RangeInclusive;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{
    parse_cost_matrix, parse_workflow, CostMatrix, LocationId, Service, ServiceId, Workflow,
};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Linear,
    FanIn,
    FanOut,
}

/// Relative frequency of each fragment kind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatternWeights {
    pub linear: f64,
    pub fan_in: f64,
    pub fan_out: f64,
}

impl Default for PatternWeights {
    fn default() -> Self {
        PatternWeights {
            linear: 1.0,
            fan_in: 1.0,
            fan_out: 1.0,
        }
    }
}

impl PatternWeights {
    pub fn only(p: Pattern) -> Self {
        let mut w = PatternWeights {
            linear: 0.0,
            fan_in: 0.0,
            fan_out: 0.0,
        };
        match p {
            Pattern::Linear => w.linear = 1.0,
            Pattern::FanIn => w.fan_in = 1.0,
            Pattern::FanOut => w.fan_out = 1.0,
        }
        w
    }
}

#[derive(Clone, Debug)]
pub struct WorkflowGenerator {
    pub n_services: RangeInclusive<usize>,
    pub regions: Vec<LocationId>,
    pub weights: PatternWeights,
}

impl WorkflowGenerator {
    /// 8 to 11 services, equal pattern weights.
    pub fn new(regions: Vec<LocationId>) -> Self {
        WorkflowGenerator {
            n_services: 8..=11,
            regions,
            weights: PatternWeights::default(),
        }
    }

    pub fn generate(&self, seed: u64) -> Result<Workflow> {
        self.generate_traced(seed).map(|(w, _)| w)
    }

    /// Also returns the fragments that were actually laid down. A fragment
    /// that could not take its full shape (e.g. a fan-out with one service
    /// left) is recorded as linear.
    pub fn generate_traced(&self, seed: u64) -> Result<(Workflow, Vec<Pattern>)> {
        if *self.n_services.start() == 0 || self.n_services.is_empty() {
            return Err(Error::BadGenerator(
                "service count range must be non-empty and start at 1 or more".into(),
            ));
        }
        if self.regions.is_empty() {
            return Err(Error::BadGenerator(
                "at least one region is required".into(),
            ));
        }
        let PatternWeights {
            linear,
            fan_in,
            fan_out,
        } = self.weights;
        let pick = WeightedIndex::new([linear, fan_in, fan_out])
            .map_err(|e| Error::BadGenerator(format!("pattern weights: {e}")))?;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(self.n_services.clone());
        let mut preds: Vec<Vec<usize>> = vec![Vec::new()];
        let mut frontier = vec![0usize];
        let mut patterns = Vec::new();
        let new_node = |preds: &mut Vec<Vec<usize>>, from: Vec<usize>| {
            preds.push(from);
            preds.len() - 1
        };

        while preds.len() < n {
            let left = n - preds.len();
            let pattern = [Pattern::Linear, Pattern::FanIn, Pattern::FanOut][pick.sample(&mut rng)];
            let at = rng.gen_range(0..frontier.len());
            match pattern {
                Pattern::FanOut if left >= 2 => {
                    let k = rng.gen_range(2..=3).min(left);
                    let parent = frontier.swap_remove(at);
                    for _ in 0..k {
                        let c = new_node(&mut preds, vec![parent]);
                        frontier.push(c);
                    }
                    patterns.push(Pattern::FanOut);
                }
                Pattern::FanIn if left > 2usize.saturating_sub(frontier.len()) => {
                    while frontier.len() < 2 {
                        let s = new_node(&mut preds, Vec::new());
                        frontier.push(s);
                    }
                    let k = rng.gen_range(2..=3).min(frontier.len());
                    let mut joined = Vec::with_capacity(k);
                    for _ in 0..k {
                        let i = rng.gen_range(0..frontier.len());
                        joined.push(frontier.swap_remove(i));
                    }
                    joined.sort_unstable();
                    let sink = new_node(&mut preds, joined);
                    frontier.push(sink);
                    patterns.push(Pattern::FanIn);
                }
                _ => {
                    let parent = frontier[at];
                    frontier[at] = new_node(&mut preds, vec![parent]);
                    patterns.push(Pattern::Linear);
                }
            }
        }

        let ids: Vec<ServiceId> = (1..=n)
            .map(|i| ServiceId::new(format!("s{i}")).expect("valid token"))
            .collect();
        let mut out = Vec::with_capacity(n);
        let mut services = Vec::with_capacity(n);
        for p in &preds {
            let o = Rational::from_integer(rng.gen_range(1..=10));
            let i = if p.is_empty() {
                Rational::from_integer(rng.gen_range(1..=10))
            } else {
                p.iter().map(|&j| out[j]).sum()
            };
            let loc = self.regions[rng.gen_range(0..self.regions.len())].clone();
            services.push(Service::new(ids[out.len()].clone(), loc, i, o));
            out.push(o);
        }
        let edges = preds
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |&p| (p, c)))
            .map(|(p, c)| (ids[p].clone(), ids[c].clone()))
            .collect();
        Ok((Workflow::checked(services, edges)?, patterns))
    }
}

pub fn generate_workflow(
    seed: u64,
    n_services: RangeInclusive<usize>,
    regions: &[LocationId],
    weights: PatternWeights,
) -> Result<Workflow> {
    WorkflowGenerator {
        n_services,
        regions: regions.to_vec(),
        weights,
    }
    .generate(seed)
}

/// Regions as points in a unit plane, grouped around a few continent-like
/// centres. The cost between two regions is their distance, stretched by a
/// random symmetric jitter, rounded to 3 decimals and multiplied by
/// `plane_scale`.
#[derive(Clone, Debug)]
pub struct GeoModel {
    pub clusters: usize,
    /// Half-width of the square each region is scattered in around its centre.
    pub spread: f64,
    /// Upper bound of the multiplicative jitter `1 + u * jitter`, `u` in [0, 1).
    pub jitter: f64,
    pub plane_scale: Rational,
    /// Stored diagonal: engine-to-service cost inside one region.
    pub local_cost: Rational,
}

impl Default for GeoModel {
    fn default() -> Self {
        GeoModel {
            clusters: 3,
            spread: 0.08,
            jitter: 0.25,
            plane_scale: Rational::from_integer(100),
            local_cost: Rational::new(1, 2),
        }
    }
}

pub fn synthetic_cost_matrix(seed: u64, regions: &[LocationId], model: &GeoModel) -> CostMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clusters = model.clusters.max(1);
    let centres: Vec<(f64, f64)> = (0..clusters).map(|_| (rng.gen(), rng.gen())).collect();
    let points: Vec<(f64, f64)> = (0..regions.len())
        .map(|i| {
            let (cx, cy) = centres[i % clusters];
            let dx = rng.gen_range(-1.0..=1.0) * model.spread;
            let dy = rng.gen_range(-1.0..=1.0) * model.spread;
            (cx + dx, cy + dy)
        })
        .collect();
    let n = regions.len();
    let mut base = vec![vec![Rational::ZERO; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let (pa, pb) = (points[a], points[b]);
            let d = ((pa.0 - pb.0).powi(2) + (pa.1 - pb.1).powi(2)).sqrt();
            let stretched = d * (1.0 + rng.gen::<f64>() * model.jitter);
            let q = Rational::round_to_decimal(stretched, 3).max(Rational::new(1, 1000));
            base[a][b] = q;
            base[b][a] = q;
        }
    }
    CostMatrix::from_fn(regions.to_vec(), |a, b| {
        if a == b {
            model.local_cost
        } else {
            model.plane_scale * base[a][b]
        }
    })
    .expect("synthetic costs are non-negative and the shape is square")
}

/// `r1, r2, ...`
pub fn region_names(n: usize) -> Vec<LocationId> {
    (1..=n)
        .map(|i| LocationId::new(format!("r{i}")).expect("valid token"))
        .collect()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses and validates a workflow file.
pub fn load_workflow(path: impl AsRef<Path>) -> Result<Workflow> {
    let w = parse_workflow(&read(path.as_ref())?)?;
    let violations = w.validate();
    if violations.is_empty() {
        Ok(w)
    } else {
        Err(Error::InvalidWorkflow(violations))
    }
}

pub fn load_cost_matrix(path: impl AsRef<Path>) -> Result<CostMatrix> {
    parse_cost_matrix(&read(path.as_ref())?)
}
