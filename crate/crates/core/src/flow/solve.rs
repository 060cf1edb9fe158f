use std::collections::VecDeque;

use super::{FlowError, FlowNetwork, FlowResult};

/// Residual graph; edge `2a` is arc `a` forward, `2a + 1` its reverse.
struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(net: &FlowNetwork) -> Self {
        let m = net.arcs().len();
        let mut r = Residual {
            head: Vec::with_capacity(2 * m),
            cap: Vec::with_capacity(2 * m),
            cost: Vec::with_capacity(2 * m),
            adj: vec![Vec::new(); net.num_nodes()],
        };
        for (a, arc) in net.arcs().iter().enumerate() {
            r.head.extend([arc.to, arc.from]);
            r.cap.extend([arc.capacity, 0]);
            r.cost.extend([arc.cost, -arc.cost]);
            r.adj[arc.from].push(2 * a);
            r.adj[arc.to].push(2 * a + 1);
        }
        r
    }

    fn tail(&self, e: usize) -> usize {
        self.head[e ^ 1]
    }

    /// Pushes the path bottleneck (capped by `limit`) back from `sink`.
    fn augment(&mut self, pred: &[Option<usize>], source: usize, sink: usize, limit: i64) -> i64 {
        let mut delta = limit;
        let mut v = sink;
        while v != source {
            let e = pred[v].expect("path");
            delta = delta.min(self.cap[e]);
            v = self.tail(e);
        }
        let mut v = sink;
        while v != source {
            let e = pred[v].expect("path");
            self.cap[e] -= delta;
            self.cap[e ^ 1] += delta;
            v = self.tail(e);
        }
        delta
    }

    fn result(&self, net: &FlowNetwork, value: i64) -> FlowResult {
        let flows: Vec<i64> = (0..net.arcs().len()).map(|a| self.cap[2 * a + 1]).collect();
        let cost = net.arcs().iter().zip(&flows).map(|(arc, &f)| arc.cost * f as f64).sum();
        FlowResult { value, flows, cost }
    }
}

/// Maximum flow by shortest (BFS) augmenting paths.
pub fn max_flow(net: &FlowNetwork) -> Result<FlowResult, FlowError> {
    let (s, t) = (net.source(), net.sink());
    let mut r = Residual::new(net);
    let mut value = 0i64;
    loop {
        let mut pred: Vec<Option<usize>> = vec![None; net.num_nodes()];
        let mut seen = vec![false; net.num_nodes()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &e in &r.adj[u] {
                let v = r.head[e];
                if r.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    pred[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            break;
        }
        value += r.augment(&pred, s, t, i64::MAX);
    }
    let result = r.result(net, value);
    debug_assert!(result.verify(net).is_ok());
    Ok(result)
}

/// Minimum-cost flow of exactly `required` units by successive shortest
/// paths with Dijkstra on reduced costs. Among equal-cost paths the one
/// found through the lowest arc indices wins.
pub fn min_cost_flow(net: &FlowNetwork, required: i64) -> Result<FlowResult, FlowError> {
    if required < 0 {
        return Err(FlowError::InvalidNetwork(format!("negative required value {required}")));
    }
    let (s, t) = (net.source(), net.sink());
    let n = net.num_nodes();
    let mut r = Residual::new(net);
    let mut potential = vec![0.0f64; n];
    let mut value = 0i64;
    while value < required {
        let mut dist = vec![f64::INFINITY; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut done = vec![false; n];
        dist[s] = 0.0;
        loop {
            let mut u = None;
            for v in 0..n {
                if !done[v] && dist[v].is_finite() && u.is_none_or(|w: usize| dist[v] < dist[w]) {
                    u = Some(v);
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            for &e in &r.adj[u] {
                if r.cap[e] <= 0 {
                    continue;
                }
                let v = r.head[e];
                let reduced = (r.cost[e] + potential[u] - potential[v]).max(0.0);
                let cand = dist[u] + reduced;
                if !done[v] && cand < dist[v] {
                    dist[v] = cand;
                    pred[v] = Some(e);
                }
            }
        }
        if !dist[t].is_finite() {
            return Err(FlowError::ValueUnreachable { required, max: value });
        }
        for v in 0..n {
            if dist[v].is_finite() {
                potential[v] += dist[v];
            }
        }
        value += r.augment(&pred, s, t, required - value);
    }
    let result = r.result(net, value);
    debug_assert!(result.verify(net).is_ok());
    Ok(result)
}
