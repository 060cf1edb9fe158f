//! Linear and mixed-integer linear programming: a dense two-phase simplex and a
//! best-bound branch-and-bound over a handful of bounded integer variables.

mod branch;
mod lp_format;
mod program;
mod simplex;

pub use branch::{solve_milp, solve_milp_with, BranchStats, MilpOptions};
pub use lp_format::write_lp_format;
pub use program::{Bounds, LinearProgram, Relation, Row, Sense, Var};
pub use simplex::{solve_lp, FEASIBILITY_TOL};

use thiserror::Error;

/// Integrality tolerance: values this close to an integer are snapped to it.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Dual multipliers for the normalized standard-form rows, with the dual objective
/// mapped back to the caller's sense.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificate {
    pub row_duals: Vec<f64>,
    pub objective: f64,
    /// Largest violation of a dual constraint; zero for an exact certificate.
    pub max_infeasibility: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: Status,
    pub values: Vec<f64>,
    pub objective: f64,
    pub dual: Option<DualCertificate>,
    pub pivots: usize,
}

impl LpSolution {
    pub(crate) fn without_point(status: Status, n: usize) -> Self {
        Self { status, values: vec![0.0; n], objective: f64::NAN, dual: None, pivots: 0 }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    /// `|primal − dual|`, the quantity audited by weak duality.
    pub fn duality_gap(&self) -> Option<f64> {
        self.dual.as_ref().map(|d| (self.objective - d.objective).abs())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("simplex cycling or pivot limit reached after {pivots} pivots")]
    IterationLimit { pivots: usize },
    #[error("branch-and-bound node limit of {nodes} exceeded")]
    NodeLimit { nodes: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[cfg(test)]
mod tests;
