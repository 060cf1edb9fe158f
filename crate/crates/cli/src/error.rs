use loadfair::assign::AssignError;
use loadfair::centers::CentersError;
use loadfair::gen::GenError;
use loadfair::model::InstanceError;
use loadfair::oracle::OracleError;
use loadfair::solver::SolveError;

/// Failure taxonomy mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    InfeasibleFairness(String),
    #[error("{0}")]
    CapExceeded(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::InfeasibleFairness(_) => 2,
            CliError::CapExceeded(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<InstanceError> for CliError {
    fn from(e: InstanceError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<AssignError> for CliError {
    fn from(e: AssignError) -> Self {
        match e {
            AssignError::InfeasibleFairness => CliError::InfeasibleFairness(e.to_string()),
            AssignError::InvalidEpsilon(_)
            | AssignError::InvalidBudget(_)
            | AssignError::NoCenters
            | AssignError::NonVacuousFairness
            | AssignError::Instance(_) => CliError::Input(e.to_string()),
            AssignError::Solver(_) | AssignError::Flow(_) | AssignError::Internal(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<CentersError> for CliError {
    fn from(e: CentersError) -> Self {
        match e {
            CentersError::CapExceeded { .. } => CliError::CapExceeded(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InfeasibleFairness => CliError::InfeasibleFairness(e.to_string()),
            SolveError::Centers(c) => c.into(),
            SolveError::Assign(a) => a.into(),
            SolveError::Internal(_) => CliError::Internal(e.to_string()),
            SolveError::InvalidEpsilon(_) | SolveError::InvalidRepetitions | SolveError::Instance(_) => {
                CliError::Input(e.to_string())
            }
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded(_) => CliError::CapExceeded(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Input(e.to_string())
    }
}
