use std::cmp::Ordering;

use serde::Serialize;

use super::{compare_share, Center, Fraction, Instance, InstanceError};

/// A total map from points to one of the chosen centers.
///
/// `phi[j]` is a slot into `centers`, not a facility index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assignment {
    centers: Vec<Center>,
    phi: Vec<usize>,
}

impl Assignment {
    pub fn new(centers: Vec<Center>, phi: Vec<usize>) -> Self {
        Self { centers, phi }
    }

    pub fn centers(&self) -> &[Center] {
        &self.centers
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn slot_of(&self, point: usize) -> usize {
        self.phi[point]
    }

    pub fn validate(&self, inst: &Instance) -> Result<(), InstanceError> {
        if self.phi.len() != inst.len() {
            return Err(InstanceError::AssignmentLength { expected: inst.len(), found: self.phi.len() });
        }
        for (j, &slot) in self.phi.iter().enumerate() {
            if slot >= self.centers.len() {
                return Err(InstanceError::UnknownCenterSlot { point: j, slot, centers: self.centers.len() });
            }
        }
        for c in &self.centers {
            if let Center::Facility(f) = c {
                if *f >= inst.facilities().len() {
                    return Err(InstanceError::UnknownFacility { index: *f });
                }
            }
        }
        Ok(())
    }

    /// Sum of true distances per center slot.
    pub fn loads(&self, inst: &Instance) -> Result<Vec<f64>, InstanceError> {
        self.validate(inst)?;
        let mut loads = vec![0.0; self.centers.len()];
        for (j, &slot) in self.phi.iter().enumerate() {
            loads[slot] += inst.distance_to(j, &self.centers[slot])?;
        }
        Ok(loads)
    }

    /// `counts[slot][group]`.
    pub fn group_counts(&self, groups: usize, group_of: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
        let mut counts = vec![vec![0usize; groups]; self.centers.len()];
        for (j, &slot) in self.phi.iter().enumerate() {
            counts[slot][group_of(j)] += 1;
        }
        counts
    }

    pub fn summarize(&self, inst: &Instance) -> Result<Vec<CenterSummary>, InstanceError> {
        let loads = self.loads(inst)?;
        let counts = self.group_counts(inst.groups(), |j| inst.group_of(j));
        Ok(self
            .centers
            .iter()
            .zip(loads)
            .zip(counts)
            .map(|((c, load), group_counts)| CenterSummary { center: inst.center_id(c), load, group_counts })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenterSummary {
    pub center: String,
    pub load: f64,
    pub group_counts: Vec<usize>,
}

/// Maximum load over centers, measured with the true metric.
pub fn assignment_cost(inst: &Instance, a: &Assignment) -> Result<f64, InstanceError> {
    Ok(a.loads(inst)?.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolatedBound {
    /// Fewer than `β_g · |cluster|` points of the group.
    Lower,
    /// More than `α_g · |cluster|` points of the group.
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FairnessViolation {
    pub slot: usize,
    pub group: usize,
    pub count: usize,
    pub cluster_size: usize,
    pub bound: ViolatedBound,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FairnessReport {
    pub violations: Vec<FairnessViolation>,
}

impl FairnessReport {
    pub fn is_fair(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every used center against the per-group share bounds, exactly.
pub fn check_fairness(inst: &Instance, a: &Assignment) -> FairnessReport {
    let counts = a.group_counts(inst.groups(), |j| inst.group_of(j));
    let mut violations = Vec::new();
    for (slot, row) in counts.iter().enumerate() {
        let size: usize = row.iter().sum();
        if size == 0 {
            continue;
        }
        for (g, &count) in row.iter().enumerate() {
            if compare_share(count, size, &inst.beta()[g]) == Ordering::Less {
                violations.push(FairnessViolation { slot, group: g, count, cluster_size: size, bound: ViolatedBound::Lower });
            }
            if compare_share(count, size, &inst.alpha()[g]) == Ordering::Greater {
                violations.push(FairnessViolation { slot, group: g, count, cluster_size: size, bound: ViolatedBound::Upper });
            }
        }
    }
    FairnessReport { violations }
}

/// Whether one cluster with the given per-group counts satisfies the bounds.
pub fn counts_are_fair(counts: &[usize], alpha: &[Fraction], beta: &[Fraction]) -> bool {
    let size: usize = counts.iter().sum();
    counts.iter().enumerate().all(|(g, &c)| {
        compare_share(c, size, &beta[g]) != Ordering::Less && compare_share(c, size, &alpha[g]) != Ordering::Greater
    })
}
