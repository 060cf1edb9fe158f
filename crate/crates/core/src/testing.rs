//! Random small models and brute-force references for property tests.

use rand::Rng;

use crate::flow::{FlowNetwork, FlowResult};
use crate::milp::{solve_lp, Bounds, LinearProgram, Relation, Sense, Var};

/// Random bounded MILP with a few integer and continuous variables.
pub fn random_milp(rng: &mut impl Rng) -> LinearProgram {
    let sense = if rng.random_bool(0.5) { Sense::Minimize } else { Sense::Maximize };
    let mut lp = LinearProgram::new(sense);
    let n_int = rng.random_range(1..=4);
    let n_cont = rng.random_range(0..=3);
    for i in 0..n_int {
        let hi = rng.random_range(1..=5);
        lp.add_integer_var(format!("y{i}"), 0, hi, rng.random_range(-5..=5) as f64);
    }
    for i in 0..n_cont {
        lp.add_var(format!("x{i}"), Bounds::new(0.0, Some(rng.random_range(1..=6) as f64)), rng.random_range(-5..=5) as f64);
    }
    let n = n_int + n_cont;
    for _ in 0..rng.random_range(1..=4) {
        let mut terms = Vec::new();
        for j in 0..n {
            if rng.random_bool(0.7) {
                terms.push((Var(j), rng.random_range(-4..=4) as f64 + rng.random_range(0..4) as f64 * 0.25));
            }
        }
        let relation = [Relation::Le, Relation::Ge, Relation::Eq][rng.random_range(0..3)];
        let rhs = rng.random_range(-6..=12) as f64 * 0.5;
        lp.add_row(terms, relation, rhs);
    }
    lp
}

/// Optimal objective by trying every integer assignment and solving the continuous rest.
pub fn enumerate_milp(lp: &LinearProgram) -> Option<f64> {
    let ints: Vec<usize> = lp.integer_vars().collect();
    let ranges: Vec<(i64, i64)> =
        ints.iter().map(|&j| (lp.bounds[j].lower as i64, lp.bounds[j].upper.unwrap() as i64)).collect();
    let mut current: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut best: Option<f64> = None;
    let orient = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    loop {
        let mut fixed = lp.relaxation();
        for (&j, &v) in ints.iter().zip(&current) {
            fixed.bounds[j] = Bounds::new(v as f64, Some(v as f64));
        }
        let s = solve_lp(&fixed).unwrap();
        if s.is_optimal() && best.is_none_or(|b| orient * s.objective < orient * b) {
            best = Some(s.objective);
        }
        let mut pos = 0;
        loop {
            if pos == current.len() {
                return best;
            }
            current[pos] += 1;
            if current[pos] > ranges[pos].1 {
                current[pos] = ranges[pos].0;
                pos += 1;
            } else {
                break;
            }
        }
    }
}

/// Random network over `nodes` nodes; arcs that the builder rejects are redrawn.
pub fn random_network(rng: &mut impl Rng, nodes: usize, arcs: usize, max_cap: i64) -> FlowNetwork {
    let mut net = FlowNetwork::new();
    for i in 2..nodes {
        net.add_node(format!("x{i}"));
    }
    while net.arcs().len() < arcs {
        let from = rng.random_range(0..nodes);
        let to = rng.random_range(0..nodes);
        let cost = rng.random_range(0..6) as f64 * 0.5;
        let _ = net.add_arc(from, to, rng.random_range(0..=max_cap), cost);
    }
    net
}

/// Minimum source-sink cut by trying every side assignment of the inner nodes.
pub fn brute_min_cut(net: &FlowNetwork) -> i64 {
    let n = net.num_nodes();
    let inner: Vec<usize> = (0..n).filter(|&v| v != net.source() && v != net.sink()).collect();
    (0u32..1 << inner.len())
        .map(|mask| {
            let mut side = vec![false; n];
            side[net.source()] = true;
            for (b, &v) in inner.iter().enumerate() {
                side[v] = mask >> b & 1 == 1;
            }
            net.arcs().iter().filter(|a| side[a.from] && !side[a.to]).map(|a| a.capacity).sum()
        })
        .min()
        .unwrap()
}

/// Cheapest feasible flow of value `required`, by enumerating every integral arc flow.
pub fn brute_min_cost(net: &FlowNetwork, required: i64) -> Option<f64> {
    let arcs = net.arcs();
    let mut flows = vec![0i64; arcs.len()];
    let mut best: Option<f64> = None;
    loop {
        let candidate = FlowResult { value: required, flows: flows.clone(), cost: 0.0 };
        if candidate.verify(net).is_ok() {
            let cost: f64 = arcs.iter().zip(&flows).map(|(a, &f)| a.cost * f as f64).sum();
            if best.is_none_or(|b| cost < b) {
                best = Some(cost);
            }
        }
        let mut pos = 0;
        loop {
            if pos == arcs.len() {
                return best;
            }
            flows[pos] += 1;
            if flows[pos] > arcs[pos].capacity {
                flows[pos] = 0;
                pos += 1;
            } else {
                break;
            }
        }
    }
}
