//! End-to-end solving: candidate center sets times approximate fair assignment.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::assign::{fair_assignment_with, mlkc_assignment_with, AssignError, DecisionOptions, SearchTrace};
use crate::centers::{
    euclidean_candidate_centers, exhaustive_centers, metric_candidate_centers, CenterList, CenterOptions, CentersError,
};
use crate::milp::MilpOptions;
use crate::model::{assignment_cost, check_fairness, Assignment, Center, Instance, InstanceError};
use crate::par::{map, Execution};
use crate::rng::split_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Metric,
    Euclidean,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub eps: f64,
    pub mode: Mode,
    /// Independent candidate lists drawn in sampled modes.
    pub repetitions: usize,
    pub seed: u64,
    pub execution: Execution,
    pub centers: CenterOptions,
    pub milp_node_limit: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            eps: 0.5,
            mode: Mode::Exhaustive,
            repetitions: 3,
            seed: 0,
            execution: Execution::default(),
            centers: CenterOptions::default(),
            milp_node_limit: MilpOptions::default().node_limit,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("epsilon out of range: {0} (must lie strictly between 0 and 1)")]
    InvalidEpsilon(f64),
    #[error("repetitions must be at least 1")]
    InvalidRepetitions,
    #[error("no assignment satisfies the fairness bounds")]
    InfeasibleFairness,
    #[error(transparent)]
    Centers(#[from] CentersError),
    #[error(transparent)]
    Assign(AssignError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("internal contradiction: {0}")]
    Internal(String),
}

impl From<AssignError> for SolveError {
    fn from(e: AssignError) -> Self {
        match e {
            AssignError::InfeasibleFairness => SolveError::InfeasibleFairness,
            other => SolveError::Assign(other),
        }
    }
}

/// Result of one candidate set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateRecord {
    pub repetition: usize,
    pub centers: Vec<String>,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveTrace {
    /// Precision handed to the assignment step.
    pub eps0: f64,
    pub seeds: Vec<u64>,
    pub list_sizes: Vec<usize>,
    pub load_only: bool,
    /// Budget search of the winning candidate.
    pub search: SearchTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveResult {
    pub centers: Vec<Center>,
    pub center_ids: Vec<String>,
    pub assignment: Assignment,
    pub cost: f64,
    pub candidates: Vec<CandidateRecord>,
    pub trace: SolveTrace,
}

/// Assignment precision for a mode; the inequality tying it to `eps` is checked.
pub fn working_precision(mode: Mode, eps: f64) -> f64 {
    match mode {
        Mode::Exhaustive => eps,
        Mode::Euclidean => {
            let e0 = eps / 3.0;
            assert!((1.0 + e0) * (1.0 + e0) <= 1.0 + eps + 1e-12);
            e0
        }
        Mode::Metric => {
            let e0 = eps / 5.0;
            assert!((3.0 + e0) * (1.0 + e0) <= 3.0 + eps + 1e-12);
            e0
        }
    }
}

fn sorted_ids(inst: &Instance, centers: &[Center]) -> Vec<String> {
    let mut ids: Vec<String> = centers.iter().map(|c| inst.center_id(c)).collect();
    ids.sort();
    ids
}

pub fn solve_fmlkc(inst: &Instance, cfg: &SolveConfig) -> Result<SolveResult, SolveError> {
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(SolveError::InvalidEpsilon(cfg.eps));
    }
    if cfg.repetitions == 0 {
        return Err(SolveError::InvalidRepetitions);
    }
    let eps0 = working_precision(cfg.mode, cfg.eps);
    let centers_opts = CenterOptions { execution: cfg.execution, ..cfg.centers };

    let mut lists: Vec<(usize, CenterList)> = Vec::new();
    let mut seeds = Vec::new();
    match cfg.mode {
        Mode::Exhaustive => lists.push((0, exhaustive_centers(inst, &centers_opts)?)),
        Mode::Metric | Mode::Euclidean => {
            for rep in 0..cfg.repetitions {
                let seed = split_seed(cfg.seed, rep as u64);
                seeds.push(seed);
                let list = match cfg.mode {
                    Mode::Metric => metric_candidate_centers(inst, eps0, seed, &centers_opts)?,
                    _ => euclidean_candidate_centers(inst, eps0, seed, &centers_opts)?,
                };
                lists.push((rep, list));
            }
        }
    }
    let list_sizes = lists.iter().map(|(_, l)| l.len()).collect();

    // evaluate each distinct set once
    let mut jobs: Vec<(usize, Vec<Center>)> = Vec::new();
    let mut seen = HashMap::new();
    for (rep, list) in &lists {
        for set in &list.sets {
            let key = sorted_ids(inst, set);
            if seen.insert(key, ()).is_none() {
                jobs.push((*rep, set.clone()));
            }
        }
    }
    let load_only = inst.fairness_is_vacuous();
    let options = DecisionOptions {
        // candidates already run in parallel
        execution: Execution::Sequential,
        milp: MilpOptions { node_limit: cfg.milp_node_limit, ..Default::default() },
        capture_artifacts: false,
    };
    let results = map(cfg.execution, &jobs, |(_, set)| {
        if load_only {
            mlkc_assignment_with(inst, set, eps0, &options)
        } else {
            fair_assignment_with(inst, set, eps0, &options)
        }
    });

    let mut candidates = Vec::new();
    let mut best: Option<(f64, Vec<String>, usize)> = None;
    let mut outcomes = Vec::with_capacity(jobs.len());
    for (idx, ((rep, set), r)) in jobs.iter().zip(results).enumerate() {
        let out = match r {
            Ok(out) => out,
            Err(AssignError::InfeasibleFairness) => return Err(SolveError::InfeasibleFairness),
            Err(e) => return Err(e.into()),
        };
        let ids = sorted_ids(inst, set);
        candidates.push(CandidateRecord { repetition: *rep, centers: ids.clone(), cost: out.cost });
        let better = match &best {
            None => true,
            Some((c, bid, _)) => out.cost < *c || (out.cost == *c && ids < *bid),
        };
        if better {
            best = Some((out.cost, ids, idx));
        }
        outcomes.push(out);
    }
    let (_, _, idx) = best.ok_or_else(|| SolveError::Internal("empty candidate list".into()))?;
    let chosen = outcomes.swap_remove(idx);
    let centers = jobs[idx].1.clone();

    if !check_fairness(inst, &chosen.assignment).is_fair() {
        return Err(SolveError::Internal("returned assignment violates fairness".into()));
    }
    let cost = assignment_cost(inst, &chosen.assignment)?;
    if (cost - chosen.cost).abs() > 1e-9 * cost.max(1e-300) && cost != chosen.cost {
        return Err(SolveError::Internal(format!("recomputed cost {cost} differs from {}", chosen.cost)));
    }
    Ok(SolveResult {
        center_ids: centers.iter().map(|c| inst.center_id(c)).collect(),
        centers,
        assignment: chosen.assignment,
        cost,
        candidates,
        trace: SolveTrace { eps0, seeds, list_sizes, load_only, search: chosen.trace },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{t1, t2};
    use crate::gen::{generate, GenParams};

    #[test]
    fn fixtures_exhaustive() {
        let cfg = SolveConfig::default();
        let r = solve_fmlkc(&t1(), &cfg).unwrap();
        assert!(r.cost <= 1.5);
        assert_eq!(r.candidates.len(), 1);
        let r = solve_fmlkc(&t2(), &cfg).unwrap();
        assert!(r.cost <= 1.5);
        assert!(check_fairness(&t2(), &r.assignment).is_fair());
    }

    #[test]
    fn precision_inequalities() {
        for e in [0.01, 0.3, 0.5, 0.99] {
            working_precision(Mode::Euclidean, e);
            working_precision(Mode::Metric, e);
        }
    }

    #[test]
    fn bad_configs() {
        let cfg = SolveConfig { eps: 1.5, ..Default::default() };
        assert!(matches!(solve_fmlkc(&t1(), &cfg), Err(SolveError::InvalidEpsilon(_))));
        let cfg = SolveConfig { repetitions: 0, ..Default::default() };
        assert!(matches!(solve_fmlkc(&t1(), &cfg), Err(SolveError::InvalidRepetitions)));
    }

    #[test]
    fn sampled_modes_are_seed_deterministic() {
        let p = GenParams { n: 7, k: 2, ell: 2, facilities: 4, dim: 2, slack: 0.2, seed: 1 };
        let inst = generate(&p).unwrap();
        for mode in [Mode::Metric, Mode::Euclidean] {
            let centers = CenterOptions { max_sets: 60, ..Default::default() };
            let cfg = SolveConfig { mode, seed: 9, repetitions: 2, eps: 0.9, centers, ..Default::default() };
            let a = solve_fmlkc(&inst, &cfg).unwrap();
            let b = solve_fmlkc(&inst, &SolveConfig { execution: Execution::Sequential, ..cfg.clone() }).unwrap();
            assert_eq!(a, b);
        }
    }
}
