use std::collections::BTreeMap;

use log::warn;
use serde::Serialize;

use super::decide::{decide, Artifacts, BudgetedOutcome, DecisionOptions, DecisionTrace};
use super::fair_lp::{FairnessBounds, LpVariant};
use super::AssignError;
use crate::flow::{min_cost_flow, FlowNetwork};
use crate::milp::{solve_milp_with, Bounds, LinearProgram, MilpOptions, Relation, Sense, Var};
use crate::model::{Assignment, Center, DistanceTable, Instance};

/// One budget tried by the grid search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Probe {
    pub index: i32,
    pub budget: f64,
    pub feasible: bool,
    pub decision: DecisionTrace,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchTrace {
    /// Optimal fair min-sum cost to the same centers.
    pub kmedian_cost: f64,
    pub eps_prime: f64,
    pub grid_low: i32,
    pub grid_high: i32,
    pub probes: Vec<Probe>,
    pub chosen_index: Option<i32>,
    pub linear_fallback: bool,
    /// Branch-and-bound runs across the min-sum step and every probe.
    pub branch_and_bound_runs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub assignment: Assignment,
    pub cost: f64,
    pub trace: SearchTrace,
    /// Present when requested and the answer came from a budgeted decision.
    pub artifacts: Option<Box<Artifacts>>,
}

/// Exactly optimal fair min-sum assignment to `centers` and its cost.
pub fn fair_kmedian_assignment(inst: &Instance, centers: &[Center]) -> Result<(Assignment, f64), AssignError> {
    if centers.is_empty() {
        return Err(AssignError::NoCenters);
    }
    let table = inst.distance_table(centers)?;
    let (a, d, _) = kmedian(inst, centers, &table, &MilpOptions::default())?;
    Ok((a, d))
}

/// Returns the assignment, its min-sum cost, and whether branch-and-bound ran.
fn kmedian(
    inst: &Instance,
    centers: &[Center],
    table: &DistanceTable,
    milp: &MilpOptions,
) -> Result<(Assignment, f64, usize), AssignError> {
    let (k, n, groups) = (centers.len(), inst.len(), inst.groups());
    if inst.fairness_is_vacuous() {
        let phi: Vec<usize> = (0..n)
            .map(|j| (0..k).min_by(|&a, &b| table.get(a, j).total_cmp(&table.get(b, j))).expect("centers"))
            .collect();
        let cost = phi.iter().enumerate().map(|(j, &i)| table.get(i, j)).sum();
        return Ok((Assignment::new(centers.to_vec(), phi), cost, 0));
    }

    let fair = FairnessBounds::new(inst.alpha(), inst.beta());
    let mut lp = LinearProgram::new(Sense::Minimize);
    let x: Vec<Var> = (0..k * n)
        .map(|ij| lp.add_var(format!("x_{}_{}", ij / n, ij % n), Bounds::NONNEGATIVE, table.get(ij / n, ij % n)))
        .collect();
    let y: Vec<Var> = (0..k * groups)
        .map(|ig| lp.add_integer_var(format!("y_{}_{}", ig % groups, ig / groups), 0, inst.group_sizes()[ig % groups] as i64, 0.0))
        .collect();
    for j in 0..n {
        lp.add_row((0..k).map(|i| (x[i * n + j], 1.0)).collect(), Relation::Eq, 1.0);
    }
    for i in 0..k {
        for g in 0..groups {
            let yv = y[i * groups + g];
            let mut terms: Vec<(Var, f64)> =
                (0..n).filter(|&j| inst.group_of(j) == g).map(|j| (x[i * n + j], 1.0)).collect();
            terms.push((yv, -1.0));
            lp.add_row(terms, Relation::Eq, 0.0);
            if fair.beta[g] > 0.0 {
                let mut terms: Vec<(Var, f64)> = (0..n).map(|j| (x[i * n + j], -fair.beta[g])).collect();
                terms.push((yv, 1.0));
                lp.add_row(terms, Relation::Ge, 0.0);
            }
            if fair.alpha[g] < 1.0 {
                let mut terms: Vec<(Var, f64)> = (0..n).map(|j| (x[i * n + j], -fair.alpha[g])).collect();
                terms.push((yv, 1.0));
                lp.add_row(terms, Relation::Le, 0.0);
            }
        }
    }
    let (sol, stats) = solve_milp_with(&lp, *milp)?;
    if !sol.is_optimal() {
        return Err(AssignError::InfeasibleFairness);
    }
    let weights: Vec<i64> = y.iter().map(|v| sol.values[v.0].round() as i64).collect();

    // per-group transportation keeps the fractional cost
    let mut phi = vec![0usize; n];
    let mut cost = 0.0;
    for g in 0..groups {
        let members: Vec<usize> = (0..n).filter(|&j| inst.group_of(j) == g).collect();
        if members.is_empty() {
            continue;
        }
        let mut net = FlowNetwork::new();
        let v: Vec<usize> = members.iter().map(|j| net.add_node(format!("v{j}"))).collect();
        let u: Vec<usize> = (0..k).map(|i| net.add_node(format!("u{i}"))).collect();
        let mut arcs = Vec::new();
        for (pos, &j) in members.iter().enumerate() {
            net.add_arc(net.source(), v[pos], 1, 0.0)?;
            for i in 0..k {
                arcs.push((j, i, net.add_arc(v[pos], u[i], 1, table.get(i, j))?));
            }
        }
        for i in 0..k {
            net.add_arc(u[i], net.sink(), weights[i * groups + g], 0.0)?;
        }
        let flow = min_cost_flow(&net, members.len() as i64)?;
        for &(j, i, a) in &arcs {
            if flow.flows[a] == 1 {
                phi[j] = i;
            }
        }
        cost += flow.cost;
    }
    if cost > sol.objective + 1e-7 * (1.0 + sol.objective.abs()) {
        return Err(AssignError::Internal(format!("transportation cost {cost} above the program optimum {}", sol.objective)));
    }
    Ok((Assignment::new(centers.to_vec(), phi), cost, stats.branched as usize))
}

/// A fair assignment to `centers` whose cost is within `1+eps` of the best fair one.
pub fn fair_assignment(inst: &Instance, centers: &[Center], eps: f64) -> Result<SearchOutcome, AssignError> {
    fair_assignment_with(inst, centers, eps, &DecisionOptions::default())
}

pub fn fair_assignment_with(
    inst: &Instance,
    centers: &[Center],
    eps: f64,
    options: &DecisionOptions,
) -> Result<SearchOutcome, AssignError> {
    grid_search(inst, centers, eps, LpVariant::Fair, options)
}

/// The load-only pipeline for instances whose fairness bounds cannot bind.
pub fn mlkc_assignment(inst: &Instance, centers: &[Center], eps: f64) -> Result<SearchOutcome, AssignError> {
    mlkc_assignment_with(inst, centers, eps, &DecisionOptions::default())
}

pub fn mlkc_assignment_with(
    inst: &Instance,
    centers: &[Center],
    eps: f64,
    options: &DecisionOptions,
) -> Result<SearchOutcome, AssignError> {
    if !inst.fairness_is_vacuous() {
        return Err(AssignError::NonVacuousFairness);
    }
    grid_search(inst, centers, eps, LpVariant::LoadOnly, options)
}

fn grid_search(
    inst: &Instance,
    centers: &[Center],
    eps: f64,
    variant: LpVariant,
    options: &DecisionOptions,
) -> Result<SearchOutcome, AssignError> {
    let table = super::checked_table(inst, centers, eps)?;
    let (kmed, d, bb) = kmedian(inst, centers, &table, &options.milp)?;
    let eps_prime = eps / 3.0;
    let mut trace = SearchTrace { kmedian_cost: d, eps_prime, branch_and_bound_runs: bb, ..Default::default() };
    if d == 0.0 {
        return Ok(SearchOutcome { assignment: kmed, cost: 0.0, trace, artifacts: None });
    }

    let base = 1.0 + eps_prime;
    let lower = d / centers.len() as f64;
    let mut m = (lower.ln() / base.ln()).floor() as i32;
    while base.powi(m + 1) <= lower {
        m += 1;
    }
    while base.powi(m) > lower {
        m -= 1;
    }
    let mut big_m = (d.ln() / base.ln()).ceil() as i32;
    while base.powi(big_m - 1) >= d {
        big_m -= 1;
    }
    while base.powi(big_m) < d {
        big_m += 1;
    }
    trace.grid_low = m;
    trace.grid_high = big_m;

    let mut results: BTreeMap<i32, BudgetedOutcome> = BTreeMap::new();
    let mut probe = |t: i32, trace: &mut SearchTrace| -> Result<bool, AssignError> {
        if let Some(r) = results.get(&t) {
            return Ok(r.is_feasible());
        }
        let budget = base.powi(t);
        let outcome = decide(inst, centers, &table, budget, eps_prime, variant, options)?;
        let feasible = outcome.is_feasible();
        trace.branch_and_bound_runs += outcome.trace().branch_and_bound_runs;
        trace.probes.push(Probe { index: t, budget, feasible, decision: outcome.trace().clone() });
        results.insert(t, outcome);
        Ok(feasible)
    };

    let (mut lo, mut hi) = (m - 1, big_m);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if probe(mid, &mut trace)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let top_ok = probe(hi, &mut trace)?;
    let monotone = {
        let first_feasible = trace.probes.iter().filter(|p| p.feasible).map(|p| p.index).min();
        let last_infeasible = trace.probes.iter().filter(|p| !p.feasible).map(|p| p.index).max();
        match (first_feasible, last_infeasible) {
            (Some(f), Some(i)) => i < f,
            _ => true,
        }
    };
    let chosen = if top_ok && monotone {
        hi
    } else {
        warn!("budget probes were not monotone; scanning the grid linearly");
        trace.linear_fallback = true;
        let mut found = None;
        for t in m..=big_m {
            if probe(t, &mut trace)? {
                found = Some(t);
                break;
            }
        }
        found.ok_or_else(|| AssignError::Internal(format!("no budget up to {} was feasible", base.powi(big_m))))?
    };
    trace.chosen_index = Some(chosen);
    match results.remove(&chosen) {
        Some(BudgetedOutcome::Feasible { assignment, cost, artifacts, .. }) => {
            Ok(SearchOutcome { assignment, cost, trace, artifacts })
        }
        _ => Err(AssignError::Internal("chosen budget has no assignment".into())),
    }
}
