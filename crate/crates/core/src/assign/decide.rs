use serde::Serialize;

use super::fair_lp::{build_partial, FairnessBounds, LpVariant};
use super::flow_round::{round_with_dumps, RoundingAudit};
use super::guess::{GuessSpace, ZEntry};
use super::rounding::{PairClass, RoundedInstance};
use super::AssignError;
use crate::milp::{solve_lp, solve_milp_with, write_lp_format, MilpOptions};
use crate::model::{check_fairness, Assignment, Center, DistanceTable, Instance};
use crate::par::{first_success, Execution};

/// Number of subtrees the guess search is split into before fanning out.
const SPLIT_TARGET: usize = 32;

#[derive(Clone, Copy, Debug, Default)]
pub struct DecisionOptions {
    pub execution: Execution,
    pub milp: MilpOptions,
    /// Keep the solved program and rounding networks as text.
    pub capture_artifacts: bool,
}

/// Debug renderings of the program that produced an assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifacts {
    /// The program in CPLEX LP format.
    pub lp: String,
    /// One Graphviz network per group, annotated with the integral flow.
    pub networks: Vec<String>,
    /// Fractional `x*`, indexed `center * n + point`.
    pub x: Vec<f64>,
    /// Integral `y*`, indexed `center * groups + group`; absent in the load-only program.
    pub y: Option<Vec<i64>>,
}

/// Work counters of one budgeted decision.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DecisionTrace {
    pub budget: f64,
    pub working_eps: f64,
    pub delta: i32,
    /// Costly (center, class, group) cells with at least one point.
    pub positions: usize,
    /// Relaxations solved at interior nodes of the guess tree.
    pub relaxations: usize,
    pub pruned: usize,
    /// Complete guesses whose program was solved.
    pub leaves: usize,
    pub leaf_infeasible: usize,
    pub branch_and_bound_runs: usize,
    pub lp_solves: usize,
    pub chosen_z: Option<Vec<ZEntry>>,
}

impl DecisionTrace {
    fn absorb(&mut self, s: &Stats) {
        self.relaxations += s.relaxations;
        self.pruned += s.pruned;
        self.leaves += s.leaves;
        self.leaf_infeasible += s.leaf_infeasible;
        self.branch_and_bound_runs += s.bb_runs;
        self.lp_solves += s.lp_solves;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BudgetedOutcome {
    Feasible {
        assignment: Assignment,
        cost: f64,
        audit: RoundingAudit,
        trace: DecisionTrace,
        artifacts: Option<Box<Artifacts>>,
    },
    /// No complete guess admits a solution, so no assignment of cost at most the budget exists.
    Infeasible { trace: DecisionTrace },
}

impl BudgetedOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, BudgetedOutcome::Feasible { .. })
    }

    pub fn trace(&self) -> &DecisionTrace {
        match self {
            BudgetedOutcome::Feasible { trace, .. } | BudgetedOutcome::Infeasible { trace } => trace,
        }
    }

    pub fn cost(&self) -> Option<f64> {
        match self {
            BudgetedOutcome::Feasible { cost, .. } => Some(*cost),
            BudgetedOutcome::Infeasible { .. } => None,
        }
    }
}

/// Decides whether a fair assignment to `centers` of cost at most `budget`
/// exists. A feasible answer has true cost at most `(1+eps)·budget`.
pub fn budgeted_fair_assignment(
    inst: &Instance,
    centers: &[Center],
    budget: f64,
    eps: f64,
) -> Result<BudgetedOutcome, AssignError> {
    budgeted_fair_assignment_with(inst, centers, budget, eps, &DecisionOptions::default())
}

pub fn budgeted_fair_assignment_with(
    inst: &Instance,
    centers: &[Center],
    budget: f64,
    eps: f64,
    options: &DecisionOptions,
) -> Result<BudgetedOutcome, AssignError> {
    let table = super::checked_table(inst, centers, eps)?;
    decide(inst, centers, &table, budget, eps, LpVariant::Fair, options)
}

/// The load-only decision for instances without effective fairness bounds;
/// solves linear programs only.
pub fn budgeted_mlkc_assignment(
    inst: &Instance,
    centers: &[Center],
    budget: f64,
    eps: f64,
    options: &DecisionOptions,
) -> Result<BudgetedOutcome, AssignError> {
    if !inst.fairness_is_vacuous() {
        return Err(AssignError::NonVacuousFairness);
    }
    let table = super::checked_table(inst, centers, eps)?;
    decide(inst, centers, &table, budget, eps, LpVariant::LoadOnly, options)
}

#[derive(Clone, Copy, Debug, Default)]
struct Stats {
    relaxations: usize,
    pruned: usize,
    leaves: usize,
    leaf_infeasible: usize,
    bb_runs: usize,
    lp_solves: usize,
}

struct Leaf {
    values: Vec<u32>,
    x: Vec<f64>,
    y: Option<Vec<i64>>,
}

enum Node {
    Pruned,
    Open,
    Found(Leaf),
}

struct Search<'a> {
    ri: &'a RoundedInstance,
    space: GuessSpace,
    fairness: Option<FairnessBounds>,
    milp: MilpOptions,
}

impl Search<'_> {
    fn check(&self, prefix: &[u32], stats: &mut Stats) -> Result<Node, AssignError> {
        let model = build_partial(self.ri, self.fairness.as_ref(), &self.space, prefix, false);
        if prefix.len() < self.space.len() {
            stats.relaxations += 1;
            stats.lp_solves += 1;
            let s = solve_lp(&model.lp.relaxation())?;
            if s.is_optimal() {
                return Ok(Node::Open);
            }
            stats.pruned += 1;
            return Ok(Node::Pruned);
        }
        stats.leaves += 1;
        let solution = match model.variant {
            LpVariant::Fair => {
                let (s, bb) = solve_milp_with(&model.lp, self.milp)?;
                stats.lp_solves += bb.lp_solves;
                stats.bb_runs += bb.branched as usize;
                s
            }
            LpVariant::LoadOnly => {
                stats.lp_solves += 1;
                solve_lp(&model.lp)?
            }
        };
        if !solution.is_optimal() {
            stats.leaf_infeasible += 1;
            return Ok(Node::Pruned);
        }
        Ok(Node::Found(Leaf {
            values: prefix.to_vec(),
            x: model.x_values(&solution.values),
            y: model.y_values(&solution.values),
        }))
    }

    fn dfs(
        &self,
        prefix: &mut Vec<u32>,
        stats: &mut Stats,
        cancelled: &dyn Fn() -> bool,
    ) -> Option<Result<Leaf, AssignError>> {
        if cancelled() {
            return None;
        }
        for v in 0..=self.space.max_value(prefix) {
            prefix.push(v);
            match self.check(prefix, stats) {
                Err(e) => return Some(Err(e)),
                Ok(Node::Found(leaf)) => return Some(Ok(leaf)),
                Ok(Node::Open) => {
                    if let Some(hit) = self.dfs(prefix, stats, cancelled) {
                        return Some(hit);
                    }
                }
                Ok(Node::Pruned) => {}
            }
            prefix.pop();
        }
        None
    }

    /// Lexicographically first complete guess with a feasible program.
    fn run(&self, execution: Execution, trace: &mut DecisionTrace) -> Result<Option<Leaf>, AssignError> {
        let mut stats = Stats::default();
        let root = self.check(&[], &mut stats);
        trace.absorb(&stats);
        match root? {
            Node::Found(leaf) => return Ok(Some(leaf)),
            Node::Pruned => return Ok(None),
            Node::Open => {}
        }
        // expand level by level, stopping before the leaves
        let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
        while frontier.len() < SPLIT_TARGET && !frontier.is_empty() && frontier[0].len() + 1 < self.space.len() {
            let mut next = Vec::new();
            let mut stats = Stats::default();
            for prefix in &frontier {
                for v in 0..=self.space.max_value(prefix) {
                    let mut child = prefix.clone();
                    child.push(v);
                    if let Node::Open = self.check(&child, &mut stats)? {
                        next.push(child);
                    }
                }
            }
            trace.absorb(&stats);
            frontier = next;
        }
        let (hit, all_stats) = first_success(execution, &frontier, |prefix, cancelled| {
            let mut stats = Stats::default();
            let mut prefix = prefix.clone();
            let hit = self.dfs(&mut prefix, &mut stats, cancelled);
            (hit, stats)
        });
        for s in &all_stats {
            trace.absorb(s);
        }
        hit.map(|(_, leaf)| leaf).transpose()
    }
}

pub(crate) fn decide(
    inst: &Instance,
    centers: &[Center],
    table: &DistanceTable,
    budget: f64,
    eps_user: f64,
    variant: LpVariant,
    options: &DecisionOptions,
) -> Result<BudgetedOutcome, AssignError> {
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(AssignError::InvalidBudget(budget));
    }
    let (group_of, groups): (Vec<usize>, usize) = match variant {
        LpVariant::Fair => ((0..inst.len()).map(|j| inst.group_of(j)).collect(), inst.groups()),
        LpVariant::LoadOnly => (vec![0; inst.len()], 1),
    };
    let working_eps = eps_user / (4 * groups + 4) as f64;
    let ri = RoundedInstance::from_table(table, &group_of, groups, working_eps, budget)?;
    let space = GuessSpace::new(&ri);
    let mut trace = DecisionTrace {
        budget,
        working_eps,
        delta: ri.delta(),
        positions: space.len(),
        ..Default::default()
    };
    let stranded = (0..ri.points()).any(|j| (0..ri.centers()).all(|i| ri.class(i, j) == PairClass::Excluded));
    if stranded {
        return Ok(BudgetedOutcome::Infeasible { trace });
    }
    let fairness = match variant {
        LpVariant::Fair => Some(FairnessBounds::new(inst.alpha(), inst.beta())),
        LpVariant::LoadOnly => None,
    };
    let search = Search { ri: &ri, space, fairness, milp: options.milp };
    let Some(leaf) = search.run(options.execution, &mut trace)? else {
        return Ok(BudgetedOutcome::Infeasible { trace });
    };
    trace.chosen_z = Some(search.space.to_guess(&ri, &leaf.values).entries());

    let (rounded, networks) = round_with_dumps(&ri, &leaf.x, leaf.y.as_deref(), options.capture_artifacts)?;
    let artifacts = options.capture_artifacts.then(|| {
        let model = build_partial(&ri, search.fairness.as_ref(), &search.space, &leaf.values, false);
        Box::new(Artifacts { lp: write_lp_format(&model.lp), networks, x: leaf.x.clone(), y: leaf.y.clone() })
    });
    let rounded_limit = (1.0 + (groups + 1) as f64 * working_eps) * budget * (1.0 + 1e-9);
    if let Some(bad) = rounded.audit.centers.iter().find(|c| c.rounded_load > rounded_limit) {
        return Err(AssignError::Internal(format!(
            "rounded load {} exceeds {rounded_limit} at budget {budget}",
            bad.rounded_load
        )));
    }
    let assignment = Assignment::new(centers.to_vec(), rounded.phi);
    let mut loads = vec![0.0; centers.len()];
    for (j, &i) in assignment.phi().iter().enumerate() {
        loads[i] += table.get(i, j);
    }
    let cost = loads.iter().cloned().fold(0.0, f64::max);
    if cost > (1.0 + eps_user) * budget * (1.0 + 1e-9) {
        return Err(AssignError::Internal(format!("cost {cost} exceeds (1+{eps_user})·{budget}")));
    }
    if variant == LpVariant::Fair && !check_fairness(inst, &assignment).is_fair() {
        return Err(AssignError::Internal("rounded assignment violates the fairness bounds".into()));
    }
    Ok(BudgetedOutcome::Feasible { assignment, cost, audit: rounded.audit, trace, artifacts })
}
