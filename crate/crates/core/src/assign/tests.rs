use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures::{t1, t2};
use crate::gen::{generate, GenParams};
use crate::model::{assignment_cost, check_fairness, Center, Fraction, Instance, Metric, Point, ValidationOptions};
use crate::oracle::{brute_force_fair_assignment, brute_force_fair_kmedian, OracleCaps};
use crate::par::Execution;

fn both() -> Vec<Center> {
    vec![Center::Facility(0), Center::Facility(1)]
}

fn seq() -> DecisionOptions {
    DecisionOptions { execution: Execution::Sequential, ..Default::default() }
}

#[test]
fn t1_budget_one_is_feasible() {
    let out = budgeted_fair_assignment(&t1(), &both(), 1.0, 0.5).unwrap();
    assert!(out.is_feasible());
    let cost = out.cost().unwrap();
    assert!(cost <= 1.5);
    assert_eq!(cost, 1.0);
}

#[test]
fn t1_budget_half_is_infeasible() {
    let out = budgeted_fair_assignment(&t1(), &both(), 0.5, 0.5).unwrap();
    assert!(!out.is_feasible());
}

#[test]
fn zero_budget_with_collocated_points() {
    // every point sits on a facility; the fair split is red+blue per facility
    let half = Fraction::new(1, 2);
    let pts = [("a", 0.0, 0), ("b", 0.0, 1), ("c", 5.0, 0), ("d", 5.0, 1)];
    let inst = Instance::new(
        pts.iter().map(|&(id, x, g)| Point { id: id.into(), coords: Some(vec![x]), group: g }).collect(),
        t1().facilities().to_vec(),
        Metric::Euclidean,
        2,
        vec![half, half],
        vec![half, half],
        ValidationOptions::default(),
    )
    .unwrap();
    let out = budgeted_fair_assignment(&inst, &both(), 0.0, 0.5).unwrap();
    assert_eq!(out.cost(), Some(0.0));
    assert!(!budgeted_fair_assignment(&t1(), &both(), 0.0, 0.5).unwrap().is_feasible());
}

#[test]
fn fixtures_within_one_and_a_half() {
    for inst in [t1(), t2()] {
        let out = fair_assignment(&inst, &both(), 0.5).unwrap();
        assert!(out.cost <= 1.5, "cost {}", out.cost);
        assert!(check_fairness(&inst, &out.assignment).is_fair());
        assert_eq!(assignment_cost(&inst, &out.assignment).unwrap(), out.cost);
    }
    let out = mlkc_assignment(&t1(), &both(), 0.5).unwrap();
    assert!(out.cost <= 1.5);
    assert_eq!(out.trace.branch_and_bound_runs, 0);
}

#[test]
fn single_center_is_forced() {
    let inst = t1().with_k(1).unwrap();
    let c = vec![Center::Facility(0)];
    let out = fair_assignment(&inst, &c, 0.5).unwrap();
    assert_eq!(out.cost, 10.0);
    let (_, d) = fair_kmedian_assignment(&inst, &c).unwrap();
    assert_eq!(d, 10.0);
}

#[test]
fn kmedian_fixtures() {
    let (a, d) = fair_kmedian_assignment(&t1(), &both()).unwrap();
    assert_eq!(d, 2.0);
    assert_eq!(a.phi(), &[0, 0, 1, 1]);
    let (a, d) = fair_kmedian_assignment(&t2(), &both()).unwrap();
    assert_eq!(d, 2.0);
    assert_eq!(a.phi(), &[0, 0, 1, 1]);
}

#[test]
fn contradictory_fairness_is_reported() {
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
    assert!(matches!(fair_assignment(&strict, &both(), 0.5), Err(AssignError::InfeasibleFairness)));
    assert!(matches!(mlkc_assignment(&t2(), &both(), 0.5), Err(AssignError::NonVacuousFairness)));
}

#[test]
fn one_point_goes_to_cheapest_center() {
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
    let out = mlkc_assignment(&inst, &both(), 0.5).unwrap();
    assert_eq!(out.assignment.phi(), &[1]);
}

#[test]
fn parameter_errors() {
    assert!(matches!(fair_assignment(&t1(), &both(), 1.5), Err(AssignError::InvalidEpsilon(_))));
    assert!(matches!(fair_assignment(&t1(), &[], 0.5), Err(AssignError::NoCenters)));
    assert!(matches!(budgeted_fair_assignment(&t1(), &both(), -1.0, 0.5), Err(AssignError::InvalidBudget(_))));
}

#[test]
fn balanced_milp_weights_on_t2() {
    let out = budgeted_fair_assignment(&t2(), &both(), 1.0, 0.5).unwrap();
    let BudgetedOutcome::Feasible { assignment, audit, .. } = out else { panic!("expected feasible") };
    assert!(audit.counts_match);
    let counts = assignment.group_counts(2, |j| t2().group_of(j));
    assert_eq!(counts, vec![vec![1, 1], vec![1, 1]]);
}

fn random_instance(rng: &mut impl Rng) -> Instance {
    let k = rng.random_range(1..=3);
    let p = GenParams {
        n: rng.random_range(2..=7),
        k,
        ell: rng.random_range(1..=2),
        facilities: rng.random_range(k..=4),
        dim: rng.random_range(0..=2),
        slack: [0.0, 0.1, 0.25][rng.random_range(0..3)],
        seed: rng.random(),
    };
    let mut p = p;
    p.ell = p.ell.min(p.n);
    generate(&p).unwrap()
}

#[test]
fn decision_and_search_against_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let caps = OracleCaps::default();
    let mut checked = 0;
    while checked < 40 {
        let inst = random_instance(&mut rng);
        let centers: Vec<Center> = (0..inst.k()).map(Center::Facility).collect();
        let Some(opt) = brute_force_fair_assignment(&inst, &centers, &caps, Execution::Sequential).unwrap() else {
            assert!(matches!(fair_assignment(&inst, &centers, 0.5), Err(AssignError::InfeasibleFairness)));
            continue;
        };
        checked += 1;
        let eps = [0.3, 0.5, 0.9][rng.random_range(0..3)];
        let out = fair_assignment_with(&inst, &centers, eps, &seq()).unwrap();
        assert!(out.cost <= (1.0 + eps) * opt.cost * (1.0 + 1e-9), "{} vs {}", out.cost, opt.cost);
        assert!(check_fairness(&inst, &out.assignment).is_fair());

        let kmed = brute_force_fair_kmedian(&inst, &centers, &caps, Execution::Sequential).unwrap().unwrap();
        let (_, d) = fair_kmedian_assignment(&inst, &centers).unwrap();
        assert!((d - kmed.cost).abs() <= 1e-9 * (1.0 + d));
        assert!(d / centers.len() as f64 <= opt.cost * (1.0 + 1e-12) && opt.cost <= d * (1.0 + 1e-12));

        for factor in [0.5, 0.9, 1.0, 1.1, 2.0] {
            let b = factor * opt.cost;
            match budgeted_fair_assignment_with(&inst, &centers, b, eps, &seq()).unwrap() {
                BudgetedOutcome::Feasible { cost, .. } => assert!(cost <= (1.0 + eps) * b * (1.0 + 1e-9)),
                BudgetedOutcome::Infeasible { .. } => assert!(opt.cost > b),
            }
        }
    }
}

#[test]
fn parallel_and_sequential_decisions_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..15 {
        let inst = random_instance(&mut rng);
        let centers: Vec<Center> = (0..inst.k()).map(Center::Facility).collect();
        let a = fair_assignment_with(&inst, &centers, 0.5, &seq());
        let b = fair_assignment_with(&inst, &centers, 0.5, &DecisionOptions::default());
        match (a, b) {
            (Ok(a), Ok(b)) => assert_eq!(a, b),
            (Err(a), Err(b)) => assert_eq!(a.to_string(), b.to_string()),
            (a, b) => panic!("modes disagree: {a:?} / {b:?}"),
        }
    }
}

#[test]
fn artifacts_are_captured_on_request() {
    let options = DecisionOptions { capture_artifacts: true, ..seq() };
    let out = budgeted_fair_assignment_with(&t2(), &both(), 1.0, 0.5, &options).unwrap();
    let BudgetedOutcome::Feasible { artifacts: Some(art), .. } = out else { panic!("expected artifacts") };
    assert!(art.lp.starts_with("Minimize"));
    // one network per group
    assert_eq!(art.networks.len(), 2);
    assert!(art.networks.iter().all(|d| d.starts_with("digraph")));
    let plain = budgeted_fair_assignment_with(&t1(), &both(), 1.0, 0.5, &seq()).unwrap();
    assert!(matches!(plain, BudgetedOutcome::Feasible { artifacts: None, .. }));
}
