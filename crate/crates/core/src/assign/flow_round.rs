use std::collections::BTreeMap;

use serde::Serialize;

use super::rounding::{PairClass, RoundedInstance};
use super::AssignError;
use crate::flow::{max_flow, FlowNetwork};

/// Values within this distance of an integer are treated as that integer
/// before taking ceilings.
const SNAP: f64 = 1e-6;

fn snap_ceil(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() <= SNAP { r as i64 } else { v.ceil() as i64 }
}

/// Per-center load accounting of one rounding, all in rounded distances.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenterAudit {
    pub fractional_load: f64,
    pub rounded_load: f64,
    /// `fractional_load` plus one cheap class distance per cheap class and group present.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundingAudit {
    pub centers: Vec<CenterAudit>,
    /// Whether every per-(center, group) count equals its target weight.
    pub counts_match: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundedAssignment {
    /// Center slot of each point.
    pub phi: Vec<usize>,
    pub audit: RoundingAudit,
}

/// Rounds a fractional solution to an integral assignment, one flow network per group.
///
/// `x` is dense (`center * n + point`); `y`, when given, holds the integral
/// group weights (`center * groups + group`) that become the sink capacities.
/// Without `y` the sink capacities are the rounded-up fractional cluster sizes.
pub fn round_lp_solution(ri: &RoundedInstance, x: &[f64], y: Option<&[i64]>) -> Result<RoundedAssignment, AssignError> {
    round_with_dumps(ri, x, y, false).map(|(r, _)| r)
}

/// As [`round_lp_solution`], optionally rendering each group's network with its flow.
pub(crate) fn round_with_dumps(
    ri: &RoundedInstance,
    x: &[f64],
    y: Option<&[i64]>,
    dump: bool,
) -> Result<(RoundedAssignment, Vec<String>), AssignError> {
    let mut dots = Vec::new();
    let (k, n, groups) = (ri.centers(), ri.points(), ri.groups());
    let mut phi = vec![usize::MAX; n];
    let mut counts = vec![0i64; k * groups];
    let mut slack = vec![0.0f64; k];
    for g in 0..groups {
        let members: Vec<usize> = (0..n).filter(|&j| ri.group_of(j) == g).collect();
        if members.is_empty() {
            continue;
        }
        let mut net = FlowNetwork::new();
        let v: Vec<usize> = members.iter().map(|j| net.add_node(format!("v{j}"))).collect();
        // class nodes per center, keyed by class, in ascending order
        let mut lambda: Vec<BTreeMap<PairClass, f64>> = vec![BTreeMap::new(); k];
        for i in 0..k {
            for &j in &members {
                let c = ri.class(i, j);
                if c != PairClass::Excluded {
                    *lambda[i].entry(c).or_insert(0.0) += x[i * n + j];
                }
            }
        }
        let mut w: Vec<BTreeMap<PairClass, usize>> = vec![BTreeMap::new(); k];
        for i in 0..k {
            for &c in lambda[i].keys() {
                let label = match c {
                    PairClass::Class(t) => format!("w{i},{t}"),
                    _ => format!("w{i},zero"),
                };
                w[i].insert(c, net.add_node(label));
            }
        }
        let u: Vec<usize> = (0..k).map(|i| net.add_node(format!("u{i}"))).collect();

        let mut point_arcs = Vec::new();
        for (pos, &j) in members.iter().enumerate() {
            net.add_arc(net.source(), v[pos], 1, 0.0)?;
            for i in 0..k {
                let c = ri.class(i, j);
                if c != PairClass::Excluded {
                    point_arcs.push((j, i, net.add_arc(v[pos], w[i][&c], 1, 0.0)?));
                }
            }
        }
        for i in 0..k {
            for (c, &lam) in &lambda[i] {
                net.add_arc(w[i][c], u[i], snap_ceil(lam), 0.0)?;
                if c.is_cheap() && lam > 0.0 {
                    if let PairClass::Class(t) = c {
                        slack[i] += ri.class_distance(*t);
                    }
                }
            }
            let cap = match y {
                Some(y) => y[i * groups + g],
                None => snap_ceil(members.iter().map(|&j| x[i * n + j]).sum()),
            };
            net.add_arc(u[i], net.sink(), cap.max(0), 0.0)?;
        }

        let flow = max_flow(&net)?;
        if dump {
            dots.push(net.to_dot(Some(&flow)));
        }
        if flow.value < members.len() as i64 {
            return Err(AssignError::Internal(format!(
                "rounding network of group {g} carries {} of {} points",
                flow.value,
                members.len()
            )));
        }
        for &(j, i, a) in &point_arcs {
            if flow.flows[a] == 1 {
                phi[j] = i;
                counts[i * groups + g] += 1;
            }
        }
    }

    let mut centers = Vec::with_capacity(k);
    for i in 0..k {
        let fractional_load: f64 =
            (0..n).filter(|&j| ri.class(i, j) != PairClass::Excluded).map(|j| ri.rounded(i, j) * x[i * n + j]).sum();
        let rounded_load: f64 = (0..n).filter(|&j| phi[j] == i).map(|j| ri.rounded(i, j)).sum();
        let bound = fractional_load + slack[i];
        if rounded_load > bound * (1.0 + 1e-9) + 1e-12 {
            return Err(AssignError::Internal(format!(
                "rounded load {rounded_load} at center {i} exceeds its bound {bound}"
            )));
        }
        centers.push(CenterAudit { fractional_load, rounded_load, bound });
    }
    let counts_match = y.is_none_or(|y| y == counts.as_slice());
    if !counts_match {
        return Err(AssignError::Internal("rounded group counts differ from the integral weights".into()));
    }
    Ok((RoundedAssignment { phi, audit: RoundingAudit { centers, counts_match } }, dots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t2;
    use crate::model::{Center, DistanceTable};

    #[test]
    fn integral_input_is_kept() {
        let table = DistanceTable::from_rows(vec![vec![1.0, 2.0, 3.0], vec![2.0, 1.0, 0.5]]);
        let ri = RoundedInstance::from_table(&table, &[0, 0, 0], 1, 0.5, 4.0).unwrap();
        let x = [1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        let r = round_lp_solution(&ri, &x, Some(&[2, 1])).unwrap();
        assert_eq!(r.phi, vec![0, 1, 0]);
        assert!(r.audit.counts_match);
    }

    #[test]
    fn balanced_halves_round_to_one_of_each() {
        let inst = t2();
        let ri = RoundedInstance::new(&inst, &[Center::Facility(0), Center::Facility(1)], 0.5, 6.0).unwrap();
        let x = [0.5; 8];
        let r = round_lp_solution(&ri, &x, Some(&[1, 1, 1, 1])).unwrap();
        for i in 0..2 {
            for g in 0..2 {
                assert_eq!((0..4).filter(|&j| r.phi[j] == i && inst.group_of(j) == g).count(), 1);
            }
        }
    }

    #[test]
    fn ceiling_slack_is_one_class_distance() {
        // three points in cheap class -3 of the first center (ε = 0.5, B = 4)
        let d = 0.29;
        let table = DistanceTable::from_rows(vec![vec![d; 3], vec![0.0; 3]]);
        let ri = RoundedInstance::from_table(&table, &[0, 0, 0], 1, 0.5, 4.0).unwrap();
        assert_eq!(ri.class(0, 0), PairClass::Class(-3));
        let x = [0.5, 0.5, 0.5, 0.5, 0.5, 0.5];
        let r = round_lp_solution(&ri, &x, None).unwrap();
        let a = &r.audit.centers[0];
        assert!((a.fractional_load - 1.5 * ri.class_distance(-3)).abs() < 1e-12);
        assert!(a.rounded_load <= a.fractional_load + ri.class_distance(-3) + 1e-12);
        assert!(r.phi.iter().filter(|&&i| i == 0).count() <= 2);
    }
}
