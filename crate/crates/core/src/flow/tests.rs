use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::testing::{brute_min_cost, brute_min_cut, random_network};

fn unit_pair(costs: [f64; 2]) -> FlowNetwork {
    let mut net = FlowNetwork::new();
    let a = net.add_node("a");
    net.add_arc(net.source(), a, 2, 0.0).unwrap();
    net.add_arc(a, net.sink(), 1, costs[0]).unwrap();
    net.add_arc(a, net.sink(), 1, costs[1]).unwrap();
    net
}

#[test]
fn unit_path() {
    let mut net = FlowNetwork::new();
    let a = net.add_node("a");
    net.add_arc(net.source(), a, 1, 0.0).unwrap();
    net.add_arc(a, net.sink(), 1, 0.0).unwrap();
    assert_eq!(max_flow(&net).unwrap().value, 1);
}

#[test]
fn disconnected_source() {
    let mut net = FlowNetwork::new();
    let a = net.add_node("a");
    net.add_arc(a, net.sink(), 3, 0.0).unwrap();
    let r = max_flow(&net).unwrap();
    assert_eq!(r.value, 0);
    assert_eq!(r.flows, vec![0]);
}

#[test]
fn bipartite_perfect_matching() {
    let mut net = FlowNetwork::new();
    let u: Vec<usize> = (0..2).map(|i| net.add_node(format!("u{i}"))).collect();
    let v: Vec<usize> = (0..2).map(|j| net.add_node(format!("v{j}"))).collect();
    for &ui in &u {
        net.add_arc(net.source(), ui, 1, 0.0).unwrap();
        for &vj in &v {
            net.add_arc(ui, vj, 1, 0.0).unwrap();
        }
    }
    for &vj in &v {
        net.add_arc(vj, net.sink(), 1, 0.0).unwrap();
    }
    let r = max_flow(&net).unwrap();
    assert_eq!(r.value, 2);
    r.verify(&net).unwrap();
}

#[test]
fn parallel_arcs_by_cost() {
    let net = unit_pair([1.0, 3.0]);
    assert_eq!(min_cost_flow(&net, 1).unwrap().cost, 1.0);
    assert_eq!(min_cost_flow(&net, 2).unwrap().cost, 4.0);
    assert_eq!(min_cost_flow(&net, 3), Err(FlowError::ValueUnreachable { required: 3, max: 2 }));
}

#[test]
fn equal_costs_prefer_lower_arc_index() {
    let net = unit_pair([2.0, 2.0]);
    assert_eq!(min_cost_flow(&net, 1).unwrap().flows, vec![1, 1, 0]);
}

#[test]
fn nearest_center_transport() {
    // points at 0, 1, 4, 5; centers at 0 and 5; two points per center
    let coords = [0.0f64, 1.0, 4.0, 5.0];
    let centers = [0.0f64, 5.0];
    let mut net = FlowNetwork::new();
    let v: Vec<usize> = (0..4).map(|j| net.add_node(format!("v{j}"))).collect();
    let u: Vec<usize> = (0..2).map(|i| net.add_node(format!("u{i}"))).collect();
    let mut arc_of = Vec::new();
    for (j, &p) in coords.iter().enumerate() {
        net.add_arc(net.source(), v[j], 1, 0.0).unwrap();
        for (i, &c) in centers.iter().enumerate() {
            arc_of.push((j, i, net.add_arc(v[j], u[i], 1, (p - c).abs()).unwrap()));
        }
    }
    for &ui in &u {
        net.add_arc(ui, net.sink(), 2, 0.0).unwrap();
    }
    let r = min_cost_flow(&net, 4).unwrap();
    assert_eq!(r.cost, 2.0);
    let phi: Vec<usize> =
        (0..4).map(|j| arc_of.iter().find(|&&(jj, _, a)| jj == j && r.flows[a] == 1).unwrap().1).collect();
    assert_eq!(phi, vec![0, 0, 1, 1]);
}

#[test]
fn malformed_arcs_rejected() {
    let mut net = FlowNetwork::new();
    let a = net.add_node("a");
    assert!(net.add_arc(a, net.source(), 1, 0.0).is_err());
    assert!(net.add_arc(net.sink(), a, 1, 0.0).is_err());
    assert!(net.add_arc(a, 9, 1, 0.0).is_err());
    assert!(net.add_arc(a, net.sink(), -1, 0.0).is_err());
    assert!(net.add_arc(a, net.sink(), 1, f64::NAN).is_err());
}

#[test]
fn dot_dump_mentions_every_arc() {
    let net = unit_pair([1.0, 3.0]);
    let r = min_cost_flow(&net, 1).unwrap();
    let dot = net.to_dot(Some(&r));
    assert!(dot.contains("n2 -> n1 [label=\"1/1 c=1\"]"));
    assert!(dot.contains("n2 -> n1 [label=\"0/1 c=3\"]"));
}

#[test]
fn max_flow_equals_min_cut() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let nodes = rng.random_range(2..=12);
        let arcs = rng.random_range(0..=3 * nodes);
        let net = random_network(&mut rng, nodes, arcs, 4);
        let r = max_flow(&net).unwrap();
        r.verify(&net).unwrap();
        assert_eq!(r.value, brute_min_cut(&net));
    }
}

#[test]
fn min_cost_flow_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let nodes = rng.random_range(2..=6);
        let arcs = rng.random_range(1..=10);
        let net = random_network(&mut rng, nodes, arcs, 2);
        let value = max_flow(&net).unwrap().value;
        let r = min_cost_flow(&net, value).unwrap();
        r.verify(&net).unwrap();
        let best = brute_min_cost(&net, value).unwrap();
        assert!((r.cost - best).abs() < 1e-9, "{} vs {best}", r.cost);
    }
}
