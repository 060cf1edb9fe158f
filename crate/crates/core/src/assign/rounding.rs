use serde::Serialize;

use super::AssignError;
use crate::model::{Center, DistanceTable, Instance};

/// Relative slack on the exclusion threshold, absorbing floating-point noise.
const EXCLUSION_SLACK: f64 = 1e-12;

/// Distance class of a (center, point) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    /// Rounded distance exceeds `(1+ε)B`; the pair is unusable.
    Excluded,
    /// Zero distance; never contributes load.
    Zero,
    /// Rounded distance `(1+ε)^t ε² B`; negative `t` is cheap, non-negative costly.
    Class(i32),
}

impl PairClass {
    pub fn is_costly(self) -> bool {
        matches!(self, PairClass::Class(t) if t >= 0)
    }

    pub fn is_cheap(self) -> bool {
        matches!(self, PairClass::Class(t) if t < 0)
    }
}

/// `⌈log_{1+ε}((1+ε)/ε²)⌉`, the largest possible costly class index.
pub fn delta_bound(eps: f64) -> i32 {
    ceil_log(((1.0 + eps) / (eps * eps)).ln() / (1.0 + eps).ln())
}

fn ceil_log(x: f64) -> i32 {
    // snap values a hair above an integer produced by rounding in ln()
    let r = x.round();
    if (x - r).abs() <= 1e-9 { r as i32 } else { x.ceil() as i32 }
}

/// Distances of a fixed center list rounded up to powers of `1+ε` relative to a budget.
#[derive(Clone, Debug)]
pub struct RoundedInstance {
    k: usize,
    n: usize,
    groups: usize,
    group_of: Vec<usize>,
    group_sizes: Vec<usize>,
    eps: f64,
    budget: f64,
    classes: Vec<PairClass>,
    distances: Vec<f64>,
    rounded: Vec<f64>,
    delta: i32,
    populations: Vec<u32>,
}

impl RoundedInstance {
    /// Rounds the distances from every point to every center in `centers`.
    pub fn new(inst: &Instance, centers: &[Center], eps: f64, budget: f64) -> Result<Self, AssignError> {
        let table = inst.distance_table(centers)?;
        let group_of: Vec<usize> = (0..inst.len()).map(|j| inst.group_of(j)).collect();
        Self::from_table(&table, &group_of, inst.groups(), eps, budget)
    }

    /// As [`RoundedInstance::new`] with precomputed distances and an explicit
    /// group map. A budget of zero keeps only zero-distance pairs.
    pub fn from_table(
        table: &DistanceTable,
        group_of: &[usize],
        groups: usize,
        eps: f64,
        budget: f64,
    ) -> Result<Self, AssignError> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(AssignError::InvalidEpsilon(eps));
        }
        if !(budget >= 0.0 && budget.is_finite()) {
            return Err(AssignError::InvalidBudget(budget));
        }
        let (k, n) = (table.centers(), table.points());
        let mut group_sizes = vec![0; groups];
        for &g in group_of {
            group_sizes[g] += 1;
        }
        let unit = eps * eps * budget;
        let limit = (1.0 + eps) * budget * (1.0 + EXCLUSION_SLACK);
        let mut classes = Vec::with_capacity(k * n);
        let mut distances = Vec::with_capacity(k * n);
        let mut rounded = Vec::with_capacity(k * n);
        for i in 0..k {
            for j in 0..n {
                let d = table.get(i, j);
                let (class, dhat) = if d == 0.0 {
                    (PairClass::Zero, 0.0)
                } else if budget == 0.0 {
                    (PairClass::Excluded, f64::INFINITY)
                } else {
                    let t = class_index(d, unit, eps);
                    let dhat = class_value(t, unit, eps);
                    if dhat > limit { (PairClass::Excluded, f64::INFINITY) } else { (PairClass::Class(t), dhat) }
                };
                classes.push(class);
                distances.push(d);
                rounded.push(dhat);
            }
        }
        let delta = classes
            .iter()
            .filter_map(|c| match c {
                PairClass::Class(t) if *t >= 0 => Some(*t),
                _ => None,
            })
            .max()
            .unwrap_or(-1);
        let width = (delta + 1) as usize;
        let mut populations = vec![0u32; k * width * groups];
        for i in 0..k {
            for (j, &g) in group_of.iter().enumerate() {
                if let PairClass::Class(t) = classes[i * n + j] {
                    if t >= 0 {
                        populations[(i * width + t as usize) * groups + g] += 1;
                    }
                }
            }
        }
        Ok(Self {
            k,
            n,
            groups,
            group_of: group_of.to_vec(),
            group_sizes,
            eps,
            budget,
            classes,
            distances,
            rounded,
            delta,
            populations,
        })
    }

    pub fn centers(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn group_of(&self, point: usize) -> usize {
        self.group_of[point]
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn class(&self, center: usize, point: usize) -> PairClass {
        self.classes[center * self.n + point]
    }

    pub fn distance(&self, center: usize, point: usize) -> f64 {
        self.distances[center * self.n + point]
    }

    /// Rounded distance; infinite for excluded pairs.
    pub fn rounded(&self, center: usize, point: usize) -> f64 {
        self.rounded[center * self.n + point]
    }

    /// Largest costly class present, or -1 when every pair is cheap, zero or excluded.
    pub fn delta(&self) -> i32 {
        self.delta
    }

    /// `d_t = (1+ε)^t ε² B`.
    pub fn class_distance(&self, t: i32) -> f64 {
        class_value(t, self.eps * self.eps * self.budget, self.eps)
    }

    /// Number of points of group `g` in costly class `t` of center `i`.
    pub fn population(&self, center: usize, t: i32, group: usize) -> u32 {
        if t < 0 || t > self.delta {
            return 0;
        }
        let width = (self.delta + 1) as usize;
        self.populations[(center * width + t as usize) * self.groups + group]
    }

    /// Distinct cheap classes of group `g` at center `i`, ascending.
    pub fn cheap_classes(&self, center: usize, group: usize) -> Vec<i32> {
        let mut out: Vec<i32> = (0..self.n)
            .filter(|&j| self.group_of[j] == group)
            .filter_map(|j| match self.class(center, j) {
                PairClass::Class(t) if t < 0 => Some(t),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Per-center costly count cap `⌊2/ε²⌋`.
    pub fn count_cap(&self) -> u64 {
        (2.0 / (self.eps * self.eps)).floor() as u64
    }
}

fn class_value(t: i32, unit: f64, eps: f64) -> f64 {
    (1.0 + eps).powi(t) * unit
}

/// Smallest `t` with `d ≤ (1+ε)^t ε² B`.
fn class_index(d: f64, unit: f64, eps: f64) -> i32 {
    let mut t = ((d / unit).ln() / (1.0 + eps).ln()).ceil() as i32;
    while class_value(t, unit, eps) < d {
        t += 1;
    }
    while class_value(t - 1, unit, eps) >= d {
        t -= 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t1;
    use crate::model::Center;

    fn single(d: f64, eps: f64, budget: f64) -> (PairClass, f64) {
        let table = DistanceTable::from_rows(vec![vec![d]]);
        let ri = RoundedInstance::from_table(&table, &[0], 1, eps, budget).unwrap();
        (ri.class(0, 0), ri.rounded(0, 0))
    }

    #[test]
    fn hand_evaluated_classes() {
        let (c, dhat) = single(3.0, 0.5, 4.0);
        assert_eq!(c, PairClass::Class(3));
        assert!((dhat - 3.375).abs() < 1e-12);
        assert!(c.is_costly());
        let (c, dhat) = single(0.4, 0.5, 4.0);
        assert_eq!(c, PairClass::Class(-2));
        assert!((dhat - 1.0 / 2.25).abs() < 1e-12);
        assert!(c.is_cheap());
        assert_eq!(single(0.0, 0.5, 4.0), (PairClass::Zero, 0.0));
        assert_eq!(single(4.6, 0.5, 4.0).0, PairClass::Class(4));
        assert_eq!(single(5.5, 0.5, 4.0).0, PairClass::Excluded);
    }

    #[test]
    fn delta_bound_values() {
        assert_eq!(delta_bound(0.5), 5);
        assert_eq!(delta_bound(0.9), 2);
    }

    #[test]
    fn all_cheap_has_no_costly_range() {
        let ri = RoundedInstance::new(&t1(), &[Center::Facility(0), Center::Facility(1)], 0.5, 1000.0).unwrap();
        assert_eq!(ri.delta(), -1);
        assert_eq!(ri.population(0, 0, 0), 0);
    }

    #[test]
    fn zero_budget_keeps_only_collocated_pairs() {
        let ri = RoundedInstance::new(&t1(), &[Center::Facility(0), Center::Facility(1)], 0.5, 0.0).unwrap();
        assert_eq!(ri.class(0, 0), PairClass::Zero);
        assert_eq!(ri.class(0, 1), PairClass::Excluded);
        assert_eq!(ri.class(1, 3), PairClass::Zero);
    }

    #[test]
    fn sandwich_and_sign_rule_on_a_sweep() {
        for eps in [0.05, 0.3, 0.5, 0.9] {
            for budget in [0.7, 1.0, 13.0] {
                let unit = eps * eps * budget;
                let ds: Vec<f64> = (1..400).map(|s| s as f64 * 0.005 * budget).collect();
                let table = DistanceTable::from_rows(vec![ds.clone()]);
                let ri = RoundedInstance::from_table(&table, &vec![0; ds.len()], 1, eps, budget).unwrap();
                assert!(ri.delta() <= delta_bound(eps));
                for (j, &d) in ds.iter().enumerate() {
                    match ri.class(0, j) {
                        PairClass::Class(t) => {
                            let dhat = ri.rounded(0, j);
                            assert!(d <= dhat && dhat <= (1.0 + eps) * d * (1.0 + 1e-12));
                            assert_eq!(t < 0, dhat < unit);
                        }
                        PairClass::Excluded => assert!(d > budget),
                        PairClass::Zero => unreachable!(),
                    }
                }
                let cheap_tail: f64 = (1..200).map(|s| ri.class_distance(-s)).sum();
                assert!(cheap_tail < unit * (1.0 + eps) / eps);
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        let table = DistanceTable::from_rows(vec![vec![1.0]]);
        assert!(matches!(RoundedInstance::from_table(&table, &[0], 1, 1.0, 1.0), Err(AssignError::InvalidEpsilon(_))));
        assert!(matches!(RoundedInstance::from_table(&table, &[0], 1, 0.5, -1.0), Err(AssignError::InvalidBudget(_))));
    }
}
