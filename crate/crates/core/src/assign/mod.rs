//! Fair assignment to a fixed set of centers: distance rounding, costly-count
//! guessing, the per-guess program, flow rounding and the budget search.

mod decide;
mod fair_lp;
mod flow_round;
mod guess;
mod rounding;
mod search;

#[cfg(test)]
mod tests;

pub use decide::{
    budgeted_fair_assignment, budgeted_fair_assignment_with, budgeted_mlkc_assignment, Artifacts, BudgetedOutcome,
    DecisionOptions, DecisionTrace,
};
pub use fair_lp::{build_fair_lp, build_load_lp, FairLpModel, FairnessBounds, LpVariant};
pub use flow_round::{round_lp_solution, CenterAudit, RoundedAssignment, RoundingAudit};
pub use guess::{enumerate_z_guesses, unpruned_guess_count, ZEntry, ZGuess, ZGuessIter};
pub use rounding::{delta_bound, PairClass, RoundedInstance};
pub use search::{
    fair_assignment, fair_assignment_with, fair_kmedian_assignment, mlkc_assignment, mlkc_assignment_with, Probe,
    SearchOutcome, SearchTrace,
};

use crate::flow::FlowError;
use crate::milp::SolverError;
use crate::model::{Center, DistanceTable, Instance, InstanceError};

#[derive(Debug, thiserror::Error)]
pub enum AssignError {
    #[error("epsilon out of range: {0} (must lie strictly between 0 and 1)")]
    InvalidEpsilon(f64),
    #[error("budget must be finite and non-negative, got {0}")]
    InvalidBudget(f64),
    #[error("no centers given")]
    NoCenters,
    #[error("no assignment satisfies the fairness bounds")]
    InfeasibleFairness,
    #[error("fairness bounds are not vacuous; use the fair assignment instead")]
    NonVacuousFairness,
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("flow: {0}")]
    Flow(#[from] FlowError),
    #[error("internal contradiction: {0}")]
    Internal(String),
}

fn checked_table(inst: &Instance, centers: &[Center], eps: f64) -> Result<DistanceTable, AssignError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(AssignError::InvalidEpsilon(eps));
    }
    if centers.is_empty() {
        return Err(AssignError::NoCenters);
    }
    Ok(inst.distance_table(centers)?)
}
