//! Exhaustive ground truth over every point-to-center map.

use serde::Serialize;

use crate::model::{counts_are_fair, Assignment, Center, DistanceTable, Instance, InstanceError};
use crate::par::{map, Execution};

/// Relative tolerance under which two costs count as the same optimum.
const TIE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCaps {
    pub max_points: usize,
    pub max_k: usize,
    /// Upper bound on the total number of maps examined.
    pub max_maps: u128,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self { max_points: 10, max_k: 3, max_maps: 50_000_000 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("instance too large for enumeration: {0}")]
    CapExceeded(String),
    #[error("k = {k} exceeds the {facilities} available facilities")]
    TooFewFacilities { k: usize, facilities: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub cost: f64,
    /// The first optimal map in lexicographic order.
    pub assignment: Assignment,
    /// Number of optimal (center set, map) pairs.
    pub optima: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Objective {
    MaxLoad,
    Sum,
}

/// Exact minimum max-load fair assignment to `centers`; `None` when no fair map exists.
pub fn brute_force_fair_assignment(
    inst: &Instance,
    centers: &[Center],
    caps: &OracleCaps,
    exec: Execution,
) -> Result<Option<OracleResult>, OracleError> {
    check_caps(inst.len(), centers.len(), 1, caps)?;
    enumerate(inst, centers, Objective::MaxLoad, exec)
}

/// Exact minimum-sum fair assignment to `centers`.
pub fn brute_force_fair_kmedian(
    inst: &Instance,
    centers: &[Center],
    caps: &OracleCaps,
    exec: Execution,
) -> Result<Option<OracleResult>, OracleError> {
    check_caps(inst.len(), centers.len(), 1, caps)?;
    enumerate(inst, centers, Objective::Sum, exec)
}

/// Exact optimum over every `k`-subset of the facilities and every fair map.
pub fn brute_force_fmlkc(inst: &Instance, caps: &OracleCaps, exec: Execution) -> Result<Option<OracleResult>, OracleError> {
    let f = inst.facilities().len();
    let k = inst.k();
    if k > f {
        return Err(OracleError::TooFewFacilities { k, facilities: f });
    }
    let sets = k_subsets(f, k);
    check_caps(inst.len(), k, sets.len() as u128, caps)?;
    let mut best: Option<OracleResult> = None;
    for set in sets {
        let centers: Vec<Center> = set.into_iter().map(Center::Facility).collect();
        let Some(r) = enumerate(inst, &centers, Objective::MaxLoad, exec)? else { continue };
        best = Some(match best {
            None => r,
            Some(mut b) => {
                if r.cost < b.cost * (1.0 - TIE) {
                    r
                } else {
                    if r.cost <= b.cost * (1.0 + TIE) {
                        b.optima += r.optima;
                    }
                    b
                }
            }
        });
    }
    Ok(best)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(p) = (0..k).rev().find(|&p| cur[p] < n - k + p) else { return out };
        cur[p] += 1;
        for q in p + 1..k {
            cur[q] = cur[q - 1] + 1;
        }
    }
}

fn check_caps(n: usize, k: usize, sets: u128, caps: &OracleCaps) -> Result<(), OracleError> {
    if n > caps.max_points || k > caps.max_k {
        return Err(OracleError::CapExceeded(format!(
            "n = {n}, k = {k} (limits n <= {}, k <= {})",
            caps.max_points, caps.max_k
        )));
    }
    let maps = (k as u128).checked_pow(n as u32).and_then(|m| m.checked_mul(sets));
    match maps {
        Some(m) if m <= caps.max_maps => Ok(()),
        _ => Err(OracleError::CapExceeded(format!("more than {} maps to examine", caps.max_maps))),
    }
}

struct Chunk {
    best: Option<(f64, Vec<usize>)>,
    optima: u64,
}

fn enumerate(
    inst: &Instance,
    centers: &[Center],
    objective: Objective,
    exec: Execution,
) -> Result<Option<OracleResult>, OracleError> {
    let table = inst.distance_table(centers)?;
    let (k, n) = (centers.len(), inst.len());
    // fix the first few points per chunk
    let mut fixed = 0;
    while fixed < n && k.pow(fixed as u32) < 64 {
        fixed += 1;
    }
    let prefixes: Vec<usize> = (0..k.pow(fixed as u32)).collect();
    let chunks = map(exec, &prefixes, |&code| scan(inst, &table, objective, fixed, code));
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut optima = 0u64;
    for c in chunks {
        let Some((cost, phi)) = c.best else { continue };
        match &best {
            Some((b, _)) if cost >= b * (1.0 - TIE) => {
                if cost <= b * (1.0 + TIE) {
                    optima += c.optima;
                }
            }
            _ => {
                best = Some((cost, phi));
                optima = c.optima;
            }
        }
    }
    Ok(best.map(|(cost, phi)| OracleResult { cost, assignment: Assignment::new(centers.to_vec(), phi), optima }))
}

/// Enumerates maps whose first `fixed` points follow the base-`k` digits of `code`.
fn scan(inst: &Instance, table: &DistanceTable, objective: Objective, fixed: usize, code: usize) -> Chunk {
    let (k, n, groups) = (table.centers(), inst.len(), inst.groups());
    let mut phi = vec![0usize; n];
    let mut c = code;
    for j in (0..fixed).rev() {
        phi[j] = c % k;
        c /= k;
    }
    let mut chunk = Chunk { best: None, optima: 0 };
    let mut counts = vec![0usize; groups];
    let mut loads = vec![0.0f64; k];
    loop {
        let fair = (0..k).all(|i| {
            counts.iter_mut().for_each(|x| *x = 0);
            for (j, &s) in phi.iter().enumerate() {
                if s == i {
                    counts[inst.group_of(j)] += 1;
                }
            }
            counts_are_fair(&counts, inst.alpha(), inst.beta())
        });
        if fair {
            loads.iter_mut().for_each(|l| *l = 0.0);
            for (j, &i) in phi.iter().enumerate() {
                loads[i] += table.get(i, j);
            }
            let cost = match objective {
                Objective::MaxLoad => loads.iter().cloned().fold(0.0, f64::max),
                Objective::Sum => loads.iter().sum(),
            };
            match &chunk.best {
                Some((b, _)) if cost >= b * (1.0 - TIE) => {
                    if cost <= b * (1.0 + TIE) {
                        chunk.optima += 1;
                    }
                }
                _ => {
                    chunk.best = Some((cost, phi.clone()));
                    chunk.optima = 1;
                }
            }
        }
        // odometer over the free suffix, last point fastest
        let mut p = n;
        loop {
            if p == fixed {
                return chunk;
            }
            p -= 1;
            phi[p] += 1;
            if phi[p] == k {
                phi[p] = 0;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{t1, t2};
    use crate::model::{assignment_cost, Fraction, Metric, Point, ValidationOptions};

    fn both() -> Vec<Center> {
        vec![Center::Facility(0), Center::Facility(1)]
    }

    fn run(inst: &Instance, obj: Objective) -> OracleResult {
        let caps = OracleCaps::default();
        let r = match obj {
            Objective::MaxLoad => brute_force_fair_assignment(inst, &both(), &caps, Execution::Sequential),
            Objective::Sum => brute_force_fair_kmedian(inst, &both(), &caps, Execution::Sequential),
        };
        r.unwrap().unwrap()
    }

    #[test]
    fn fixture_optima() {
        let r = run(&t1(), Objective::MaxLoad);
        assert_eq!(r.cost, 1.0);
        assert_eq!(assignment_cost(&t1(), &r.assignment).unwrap(), 1.0);
        assert_eq!(run(&t2(), Objective::MaxLoad).cost, 1.0);
        assert_eq!(run(&t1(), Objective::Sum).cost, 2.0);
        assert_eq!(run(&t2(), Objective::Sum).cost, 2.0);
        let g = brute_force_fmlkc(&t1(), &OracleCaps::default(), Execution::Sequential).unwrap().unwrap();
        assert_eq!(g.cost, 1.0);
        assert_eq!(g.assignment.centers(), both().as_slice());
    }

    #[test]
    fn first_optimum_in_lexicographic_order() {
        // t1 optimum: p0, p1 -> f0 and p4, p5 -> f1 is the only cost-1 map
        let r = run(&t1(), Objective::MaxLoad);
        assert_eq!(r.assignment.phi(), &[0, 0, 1, 1]);
        assert_eq!(r.optima, 1);
    }

    #[test]
    fn contradictory_fairness_is_infeasible() {
        let inst = t2();
        let one = vec![Fraction::from_integer(1); 2];
        let strict = Instance::new(
            inst.points().to_vec(),
            inst.facilities().to_vec(),
            Metric::Euclidean,
            2,
            one.clone(),
            one,
            ValidationOptions::default(),
        )
        .unwrap();
        let r = brute_force_fair_assignment(&strict, &both(), &OracleCaps::default(), Execution::Sequential).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn single_point_goes_to_nearest() {
        let inst = Instance::new(
            vec![Point { id: "p".into(), coords: Some(vec![3.5]), group: 0 }],
            t1().facilities().to_vec(),
            Metric::Euclidean,
            2,
            vec![Fraction::from_integer(1)],
            vec![Fraction::from_integer(0)],
            ValidationOptions::default(),
        )
        .unwrap();
        assert_eq!(run(&inst, Objective::Sum).cost, 1.5);
    }

    #[test]
    fn caps_and_modes() {
        let caps = OracleCaps { max_points: 3, ..Default::default() };
        assert!(matches!(
            brute_force_fair_assignment(&t1(), &both(), &caps, Execution::Sequential),
            Err(OracleError::CapExceeded(_))
        ));
        let seq = run(&t2(), Objective::MaxLoad);
        let par = brute_force_fair_assignment(&t2(), &both(), &OracleCaps::default(), Execution::Parallel).unwrap().unwrap();
        assert_eq!(seq, par);
        assert_eq!(k_subsets(4, 2).len(), 6);
        assert_eq!(k_subsets(4, 2)[5], vec![2, 3]);
    }
}
