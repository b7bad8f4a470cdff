use std::collections::HashMap;

use super::LocationId;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Per-unit data movement cost between locations.
///
/// A stored entry `(a, b)` is the cost of moving one data unit from `a` to
/// `b`. The diagonal entry `(a, a)` is the engine-to-service cost inside one
/// region; between an engine and itself the cost is always zero, which
/// [`engine_cost`](Self::engine_cost) applies. Asymmetric matrices are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostMatrix {
    locations: Vec<LocationId>,
    index: HashMap<LocationId, usize>,
    cost: Vec<Rational>,
}

impl CostMatrix {
    /// `rows[i][j]` is the cost from `locations[i]` to `locations[j]`.
    pub fn new(locations: Vec<LocationId>, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = locations.len();
        if n == 0 {
            return Err(Error::invalid("cost matrix", "no locations"));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, loc) in locations.iter().enumerate() {
            if index.insert(loc.clone(), i).is_some() {
                return Err(Error::invalid(
                    "cost matrix",
                    format!("duplicate location {loc}"),
                ));
            }
        }
        if rows.len() != n {
            return Err(Error::invalid(
                "cost matrix",
                format!("expected {n} rows, found {}", rows.len()),
            ));
        }
        let mut cost = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(
                    "cost matrix",
                    format!(
                        "row {} has {} entries, expected {n}",
                        locations[i],
                        row.len()
                    ),
                ));
            }
            if let Some(v) = row.iter().find(|v| v.is_negative()) {
                return Err(Error::invalid(
                    "cost matrix",
                    format!("row {} has negative cost {v}", locations[i]),
                ));
            }
            cost.extend(row);
        }
        Ok(CostMatrix {
            locations,
            index,
            cost,
        })
    }

    pub fn from_fn(
        locations: Vec<LocationId>,
        mut f: impl FnMut(usize, usize) -> Rational,
    ) -> Result<Self> {
        let n = locations.len();
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        CostMatrix::new(locations, rows)
    }

    pub fn locations(&self) -> &[LocationId] {
        &self.locations
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn index_of(&self, loc: &str) -> Option<usize> {
        self.index.get(loc).copied()
    }

    pub fn contains(&self, loc: &str) -> bool {
        self.index.contains_key(loc)
    }

    fn require(&self, loc: &str) -> Result<usize> {
        self.index_of(loc)
            .ok_or_else(|| Error::UnknownLocation(loc.to_string()))
    }

    pub fn entry_at(&self, from: usize, to: usize) -> Rational {
        self.cost[from * self.locations.len() + to]
    }

    /// Engine-to-engine cost by index: zero on the diagonal.
    pub fn engine_cost_at(&self, from: usize, to: usize) -> Rational {
        if from == to {
            Rational::ZERO
        } else {
            self.entry_at(from, to)
        }
    }

    /// Stored cost from `from` to `to`, used for engine/service traffic.
    pub fn entry(&self, from: &str, to: &str) -> Result<Rational> {
        Ok(self.entry_at(self.require(from)?, self.require(to)?))
    }

    /// Cost of moving one unit between two engines; zero for the same engine.
    pub fn engine_cost(&self, from: &str, to: &str) -> Result<Rational> {
        Ok(self.engine_cost_at(self.require(from)?, self.require(to)?))
    }

    /// Every entry multiplied by `k`.
    pub fn scaled(&self, k: Rational) -> CostMatrix {
        CostMatrix {
            locations: self.locations.clone(),
            index: self.index.clone(),
            cost: self.cost.iter().map(|&c| c * k).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.entry_at(i, j) == self.entry_at(j, i)))
    }

    /// Fraction of ordered triples `(a, b, c)` of distinct locations where the
    /// detour `a -> b -> c` is cheaper than the direct `a -> c`.
    pub fn triangle_violation_rate(&self) -> f64 {
        let n = self.len();
        let (mut total, mut bad) = (0u64, 0u64);
        for a in 0..n {
            for c in 0..n {
                if a == c {
                    continue;
                }
                for b in 0..n {
                    if b == a || b == c {
                        continue;
                    }
                    total += 1;
                    if self.entry_at(a, b) + self.entry_at(b, c) < self.entry_at(a, c) {
                        bad += 1;
                    }
                }
            }
        }
        if total == 0 {
            0.0
        } else {
            bad as f64 / total as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn locs(names: &[&str]) -> Vec<LocationId> {
        names.iter().map(|n| n.parse().unwrap()).collect()
    }

    #[test]
    fn engine_diagonal_is_zero() {
        let m = CostMatrix::from_fn(locs(&["a", "b"]), |i, j| {
            Rational::from_integer(1 + (i * 2 + j) as i128)
        })
        .unwrap();
        assert_eq!(m.entry("a", "a").unwrap(), Rational::from_integer(1));
        assert_eq!(m.engine_cost("a", "a").unwrap(), Rational::ZERO);
        assert_eq!(m.engine_cost("b", "b").unwrap(), Rational::ZERO);
        assert_eq!(m.engine_cost("a", "b").unwrap(), Rational::from_integer(2));
        assert_eq!(m.engine_cost("b", "a").unwrap(), Rational::from_integer(3));
        assert!(!m.is_symmetric());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(CostMatrix::new(locs(&["a"]), vec![vec![]]).is_err());
        assert!(CostMatrix::new(locs(&["a", "a"]), vec![vec![Rational::ZERO; 2]; 2]).is_err());
        assert!(CostMatrix::new(locs(&["a"]), vec![vec![Rational::from_integer(-1)]]).is_err());
        assert!(CostMatrix::new(vec![], vec![]).is_err());
    }

    #[test]
    fn unknown_location_is_an_error() {
        let m = CostMatrix::from_fn(locs(&["a"]), |_, _| Rational::ZERO).unwrap();
        assert!(matches!(m.entry("a", "z"), Err(Error::UnknownLocation(l)) if l == "z"));
    }
}
