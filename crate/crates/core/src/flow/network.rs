use std::fmt::Write;

use super::FlowError;

#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: i64,
    pub cost: f64,
}

/// Directed network with a distinguished source and sink.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowNetwork {
    labels: Vec<String>,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    /// Creates a network holding only `S` (node 0) and `T` (node 1).
    pub fn new() -> Self {
        Self { labels: vec!["S".into(), "T".into()], source: 0, sink: 1, arcs: Vec::new() }
    }

    pub fn add_node(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: i64, cost: f64) -> Result<usize, FlowError> {
        let n = self.labels.len();
        if from >= n || to >= n {
            return Err(FlowError::InvalidNetwork(format!("arc {from}->{to} references a missing node")));
        }
        if from == to {
            return Err(FlowError::InvalidNetwork(format!("self-loop at node {from}")));
        }
        if to == self.source || from == self.sink {
            return Err(FlowError::InvalidNetwork("arcs may not enter the source or leave the sink".into()));
        }
        if capacity < 0 {
            return Err(FlowError::InvalidNetwork(format!("negative capacity {capacity} on {from}->{to}")));
        }
        if !cost.is_finite() || cost < 0.0 {
            return Err(FlowError::InvalidNetwork(format!("cost {cost} on {from}->{to} must be finite and non-negative")));
        }
        self.arcs.push(Arc { from, to, capacity, cost });
        Ok(self.arcs.len() - 1)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    /// Graphviz rendering, annotating arcs with `flow/capacity` when a flow is given.
    pub fn to_dot(&self, flow: Option<&FlowResult>) -> String {
        let mut out = String::from("digraph G {\n  rankdir=LR;\n");
        for (v, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{v} [label=\"{}\"];", label.replace('"', "'"));
        }
        for (a, arc) in self.arcs.iter().enumerate() {
            let cap = match flow {
                Some(f) => format!("{}/{}", f.flows[a], arc.capacity),
                None => arc.capacity.to_string(),
            };
            let cost = if arc.cost != 0.0 { format!(" c={}", arc.cost) } else { String::new() };
            let _ = writeln!(out, "  n{} -> n{} [label=\"{cap}{cost}\"];", arc.from, arc.to);
        }
        out.push_str("}\n");
        out
    }
}

impl Default for FlowNetwork {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    pub value: i64,
    /// Flow on each arc, indexed like [`FlowNetwork::arcs`].
    pub flows: Vec<i64>,
    pub cost: f64,
}

impl FlowResult {
    /// Checks capacity bounds and conservation at every internal node.
    pub fn verify(&self, net: &FlowNetwork) -> Result<(), String> {
        if self.flows.len() != net.arcs.len() {
            return Err("flow vector length differs from arc count".into());
        }
        let mut balance = vec![0i64; net.num_nodes()];
        for (a, (arc, &f)) in net.arcs.iter().zip(&self.flows).enumerate() {
            if f < 0 || f > arc.capacity {
                return Err(format!("arc {a} carries {f} outside [0, {}]", arc.capacity));
            }
            balance[arc.from] -= f;
            balance[arc.to] += f;
        }
        for (v, &b) in balance.iter().enumerate() {
            if v != net.source && v != net.sink && b != 0 {
                return Err(format!("conservation fails at node {v} (excess {b})"));
            }
        }
        if balance[net.sink] != self.value || balance[net.source] != -self.value {
            return Err("flow value does not match sink inflow".into());
        }
        Ok(())
    }
}
