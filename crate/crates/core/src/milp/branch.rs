use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{solve_lp, Bounds, LinearProgram, LpSolution, Sense, SolverError, Status, INTEGRALITY_TOL};

#[derive(Clone, Copy, Debug)]
pub struct MilpOptions {
    pub node_limit: usize,
    /// Relative objective tolerance used for pruning.
    pub objective_tol: f64,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self { node_limit: 100_000, objective_tol: 1e-9 }
    }
}

/// Counters reported by [`solve_milp_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchStats {
    /// Whether the integer search ran at all (false for pure LPs).
    pub branched: bool,
    pub nodes: usize,
    pub lp_solves: usize,
}

struct Node {
    /// Bound in minimization orientation.
    key: f64,
    depth: usize,
    id: usize,
    bounds: Vec<(f64, f64)>,
    solution: LpSolution,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap: smaller bound first, then deeper, then older
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then(self.depth.cmp(&other.depth))
            .then(other.id.cmp(&self.id))
    }
}

pub fn solve_milp(lp: &LinearProgram) -> Result<LpSolution, SolverError> {
    solve_milp_with(lp, MilpOptions::default()).map(|(s, _)| s)
}

/// Best-bound branch-and-bound, branching on the most fractional integer variable.
/// Integer values in the returned solution are exact; the continuous part is
/// re-optimized with the integers fixed.
pub fn solve_milp_with(lp: &LinearProgram, options: MilpOptions) -> Result<(LpSolution, BranchStats), SolverError> {
    lp.validate()?;
    let ints: Vec<usize> = lp.integer_vars().collect();
    let mut stats = BranchStats { lp_solves: 1, ..Default::default() };
    if ints.is_empty() {
        return Ok((solve_lp(lp)?, stats));
    }
    stats.branched = true;
    let orient = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };

    let root_bounds: Vec<(f64, f64)> = ints
        .iter()
        .map(|&j| {
            let b = lp.bounds[j];
            (b.lower.ceil(), b.upper.expect("validated").floor())
        })
        .collect();
    let mut work = lp.relaxation();
    let mut solve_node = |bounds: &[(f64, f64)], stats: &mut BranchStats| {
        for (&j, &(lo, hi)) in ints.iter().zip(bounds) {
            work.bounds[j] = Bounds::new(lo, Some(hi));
        }
        stats.lp_solves += 1;
        solve_lp(&work)
    };
    stats.lp_solves = 0;
    let root = solve_node(&root_bounds, &mut stats)?;
    match root.status {
        Status::Infeasible => return Ok((root, stats)),
        Status::Unbounded => return Ok((root, stats)),
        Status::Optimal => {}
    }

    let mut heap = BinaryHeap::new();
    let mut next_id = 0usize;
    heap.push(Node { key: orient * root.objective, depth: 0, id: next_id, bounds: root_bounds, solution: root });
    let mut incumbent: Option<(f64, LpSolution)> = None;

    while let Some(node) = heap.pop() {
        if let Some((best, _)) = &incumbent {
            if node.key >= best - options.objective_tol * (1.0 + best.abs()) {
                break;
            }
        }
        stats.nodes += 1;
        if stats.nodes > options.node_limit {
            return Err(SolverError::NodeLimit { nodes: options.node_limit });
        }

        let values = &node.solution.values;
        let mut branch_on: Option<(usize, f64)> = None;
        let mut best_score = INTEGRALITY_TOL;
        for (pos, &j) in ints.iter().enumerate() {
            let v = values[j];
            let frac = v - v.floor();
            let score = frac.min(1.0 - frac);
            if score > best_score {
                best_score = score;
                branch_on = Some((pos, v));
            }
        }

        match branch_on {
            None => {
                let fixed: Vec<(f64, f64)> = ints
                    .iter()
                    .zip(&node.bounds)
                    .map(|(&j, &(lo, hi))| {
                        let r = values[j].round().clamp(lo, hi);
                        (r, r)
                    })
                    .collect();
                let polished = solve_node(&fixed, &mut stats)?;
                if polished.is_optimal() {
                    let key = orient * polished.objective;
                    if incumbent.as_ref().is_none_or(|(best, _)| key < *best) {
                        incumbent = Some((key, polished));
                    }
                }
            }
            Some((pos, v)) => {
                let mut down = node.bounds.clone();
                down[pos].1 = v.floor();
                let mut up = node.bounds.clone();
                up[pos].0 = v.ceil();
                for child in [down, up] {
                    if child[pos].0 > child[pos].1 {
                        continue;
                    }
                    let sol = solve_node(&child, &mut stats)?;
                    if sol.is_optimal() {
                        next_id += 1;
                        heap.push(Node {
                            key: orient * sol.objective,
                            depth: node.depth + 1,
                            id: next_id,
                            bounds: child,
                            solution: sol,
                        });
                    }
                }
            }
        }
    }

    match incumbent {
        Some((_, mut sol)) => {
            for &j in &ints {
                sol.values[j] = sol.values[j].round();
            }
            Ok((sol, stats))
        }
        None => Ok((LpSolution::without_point(Status::Infeasible, lp.num_vars()), stats)),
    }
}
