//! Instance data model: points with group labels, facilities, the metric, and the
//! fairness bounds, plus assignments and clusterings over them.

mod assignment;
mod clustering;
mod fraction;
mod instance;
pub mod io;

pub use assignment::{
    assignment_cost, check_fairness, counts_are_fair, Assignment, CenterSummary, FairnessReport, FairnessViolation,
    ViolatedBound,
};
pub use clustering::Clustering;
pub use fraction::{fraction_from_f64, fraction_to_f64, parse_fraction, Fraction};
pub use instance::{
    Center, DistanceMatrix, DistanceTable, Facility, Instance, Metric, Point, ValidationOptions,
};

pub(crate) use fraction::compare_share;
pub(crate) use instance::euclidean;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no points")]
    NoPoints,
    #[error("no facilities")]
    NoFacilities,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("alpha has {alpha} entries and beta has {beta}; both need the same nonzero length")]
    FairnessLength { alpha: usize, beta: usize },
    #[error("{field}[{group}] is outside [0, 1]")]
    FractionRange { field: &'static str, group: usize },
    #[error("beta[{group}] exceeds alpha[{group}]")]
    BetaExceedsAlpha { group: usize },
    #[error("point {point:?} has group {group} but only {groups} groups are defined")]
    UnknownGroup { point: String, group: usize, groups: usize },
    #[error("duplicate id {id:?}")]
    DuplicateId { id: String },
    #[error("{id:?} has no coordinates")]
    MissingCoords { id: String },
    #[error("{id:?} has {found} coordinates, expected {expected}")]
    DimensionMismatch { id: String, expected: usize, found: usize },
    #[error("{id:?} has a non-finite coordinate")]
    NonFinite { id: String },
    #[error("matrix row {row} has length {len}, expected {expected}")]
    MatrixShape { row: usize, len: usize, expected: usize },
    #[error("matrix diagonal entry {index} is not zero")]
    NonzeroDiagonal { index: usize },
    #[error("matrix entry ({a}, {b}) is negative or not finite")]
    NegativeDistance { a: usize, b: usize },
    #[error("matrix is not symmetric: d({a},{b}) != d({b},{a})")]
    Asymmetric { a: usize, b: usize },
    #[error("triangle inequality violated: d({a},{b}) > d({a},{via}) + d({via},{b})")]
    Triangle { a: usize, b: usize, via: usize },
    #[error("unknown facility index {index}")]
    UnknownFacility { index: usize },
    #[error("unknown facility id {id:?}")]
    UnknownFacilityId { id: String },
    #[error("free locations need the euclidean metric")]
    LocationInExplicitMetric,
    #[error("assignment covers {found} points, instance has {expected}")]
    AssignmentLength { expected: usize, found: usize },
    #[error("point {point} is mapped to center slot {slot}, but only {centers} centers exist")]
    UnknownCenterSlot { point: usize, slot: usize, centers: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
