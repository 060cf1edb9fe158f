//! Integral max-flow and min-cost flow on small networks.

mod network;
mod solve;

#[cfg(test)]
mod tests;

pub use network::{Arc, FlowNetwork, FlowResult};
pub use solve::{max_flow, min_cost_flow};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("value unreachable: required {required}, maximum flow is {max}")]
    ValueUnreachable { required: i64, max: i64 },
}
